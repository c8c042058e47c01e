#pragma once

#include <iosfwd>
#include <string>

#include "catgraph/distance.hpp"
#include "catgraph/graph.hpp"
#include "catgraph/inference.hpp"
#include "catgraph/sim.hpp"
#include "catgraph/table.hpp"

namespace catgraph {

/// Contingency CSV: header `category,group_a,group_b`, one row per
/// category, UTF-8, no thousands separators.
ContingencyTable read_table_csv(std::istream& in);
ContingencyTable read_table_csv_file(const std::string& path);
void write_table_csv(const ContingencyTable& table, std::ostream& out);

/// Distance CSV: header row of category ids; each subsequent row begins
/// with its category id followed by K reals.  Must cover exactly the
/// table's ids (order-insensitive, joined by id).
DistanceMatrix read_distance_csv(std::istream& in, const ContingencyTable& table);
DistanceMatrix read_distance_csv_file(const std::string& path, const ContingencyTable& table);
void write_distance_csv(const DistanceMatrix& d, const std::vector<std::string>& ids,
                        std::ostream& out);

/// Custom C0 edge list: lines `u,v` of category ids.
CategoryGraph read_edge_list(std::istream& in, const ContingencyTable& table);
CategoryGraph read_edge_list_file(const std::string& path, const ContingencyTable& table);

void write_edge_csv(const CategoryGraph& g, const std::vector<std::string>& ids,
                    std::ostream& out);
/// DOT export with per-category count annotations "(n_a, n_b)".
void write_edge_dot(const CategoryGraph& g, const ContingencyTable& table, std::ostream& out);

/// {statistic, kind, mean, variance, z, p_normal, p_perm, B, seed,
///  diagnostics:{flags, ratios}}; absent values are null.
std::string test_result_to_json(const TestResult& result);

std::string moments_to_json(const ContingencyTable& table, const CategoryGraph& c0);

void write_power_csv(const PowerTable& table, std::ostream& out);
void write_accuracy_csv(const AccuracyTable& table, std::ostream& out);

}  // namespace catgraph
