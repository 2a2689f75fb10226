#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "slerho/dirichlet.hpp"
#include "slerho/driving.hpp"
#include "slerho/energy.hpp"
#include "slerho/error.hpp"
#include "slerho/geometry.hpp"
#include "slerho/loewner.hpp"
#include "slerho/sampler.hpp"
#include "slerho/zipper.hpp"

namespace slerho::io {

using nlohmann::json;

/// 12 significant digits, as used in every CSV and JSON artifact.
std::string fmt(double x);
/// x rounded to 12 significant digits; non-finite values become "inf",
/// "-inf" or "nan" strings.
json num(double x);

void write_driving_csv(std::ostream& os, const DrivingSamples& s);
DrivingSamples read_driving_csv(std::istream& is);

/// `t,re,im` rows; t is the curve parameter, or the vertex index when the
/// curve carries none.
void write_curve_csv(std::ostream& os, const Curve& c);
/// Accepts `re,im` or `t,re,im` rows, with or without a header line.
Curve read_curve_csv(std::istream& is, Domain domain = Domain::HalfPlane);

void write_track_csv(std::ostream& os, const LoewnerTrack& track);
void write_study_csv(std::ostream& os, const RenormalizedStudy& st);
void write_paths_csv(std::ostream& os, const PathStats& stats);

struct Marker {
  cplx at;
  std::string label;
};

/// Polylines scaled into a square viewport with 5% margins. The real axis
/// (half-plane curves) or unit circle (disk curves) is drawn for reference.
void write_svg(std::ostream& os, const std::vector<Curve>& curves,
               const std::vector<Marker>& markers, int size = 800);

json to_json(const Certificate& c);
json to_json(const EnergyReport& r);
json to_json(const CoordinateChange& c);
json to_json(const PathStats& s);
json to_json(const Proportion& p);
json to_json(const LevelEstimate& e);
json to_json(const RenormalizedStudy& st);
json to_json(const IdentityCheck& c);
json to_json(const Error& e);

/// Writes `text` to `path`, creating parent directories. Throws Io.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace slerho::io
