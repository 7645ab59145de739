#pragma once

// Description files and grid dumps.
//
// Measure:   {"atoms":[{"angle":0.0,"mass":0.3}],
//             "cantor":[{"arc_start":0.0,"arc_length":1.0,"gap_ratio":0.333,
//                        "depth":12,"mass":0.7}]}
// Blaschke:  {"rotation_angle":0.0,"zeros":[{"re":0.0,"im":0.0,"mult":1}]}
// Critical:  {"points":[{"re":0.5,"im":0.0,"mult":1}]}  ("zeros" also accepted)
//
// Grid CSV:  outer_radius,radial_count,angular_count
//            <R>,<N>,<M>
//            r,theta,u
//            one line per node

#include <filesystem>
#include <string>

#include "innerlab/circle_measure.hpp"
#include "innerlab/curvature_metric.hpp"
#include "innerlab/hardy_inner.hpp"
#include "innerlab/maximal_blaschke.hpp"

namespace innerlab {

/// All parsers throw ParseError on malformed text, missing fields or
/// negative masses.
CircleMeasure parse_measure(const std::string& json_text);
BlaschkeProduct parse_blaschke(const std::string& json_text);
CriticalSet parse_critical_set(const std::string& json_text);

std::string measure_to_json(const CircleMeasure& mu);
std::string blaschke_to_json(const BlaschkeProduct& b);
std::string critical_set_to_json(const CriticalSet& c);

/// Reads a whole file; ParseError mentions the path.
std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for a CLI (truncate + write); Error mentions the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);

CircleMeasure load_measure(const std::filesystem::path& path);
BlaschkeProduct load_blaschke(const std::filesystem::path& path);
CriticalSet load_critical_set(const std::filesystem::path& path);

std::string grid_to_csv(const MetricGrid& g);
/// Rebuilds a grid (no zero annotation) from a dump.
MetricGrid grid_from_csv(const std::string& text);

}  // namespace innerlab
