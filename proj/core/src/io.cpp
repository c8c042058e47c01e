#include "catgraph/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "catgraph/errors.hpp"

namespace catgraph {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return in;
}

long long parse_count(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw ValidationError("");
    return v;
  } catch (...) {
    throw ValidationError("malformed " + what + ": '" + s + "'");
  }
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ValidationError("");
    return v;
  } catch (...) {
    throw ValidationError("malformed " + what + ": '" + s + "'");
  }
}

std::map<std::string, int> id_index(const ContingencyTable& table) {
  std::map<std::string, int> idx;
  for (int i = 0; i < table.k(); ++i) idx[table.category_ids()[static_cast<std::size_t>(i)]] = i;
  return idx;
}

}  // namespace

ContingencyTable read_table_csv(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ValidationError("empty contingency CSV");
  if (split_csv_line(lines[0]) != std::vector<std::string>{"category", "group_a", "group_b"}) {
    throw ValidationError("contingency CSV header must be 'category,group_a,group_b'");
  }
  std::vector<ContingencyTable::Record> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 3) throw ValidationError("contingency CSV row needs 3 fields: " + lines[i]);
    rows.emplace_back(f[0], parse_count(f[1], "count"), parse_count(f[2], "count"));
  }
  return ContingencyTable::from_records(rows);
}

ContingencyTable read_table_csv_file(const std::string& path) {
  auto in = open_file(path);
  return read_table_csv(in);
}

void write_table_csv(const ContingencyTable& table, std::ostream& out) {
  out << "category,group_a,group_b\n";
  for (int k = 0; k < table.k(); ++k) {
    out << table.category_ids()[static_cast<std::size_t>(k)] << ',' << table.count_a(k) << ','
        << table.count_b(k) << '\n';
  }
}

DistanceMatrix read_distance_csv(std::istream& in, const ContingencyTable& table) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ValidationError("empty distance CSV");
  const auto header = split_csv_line(lines[0]);
  const int k = table.k();
  if (static_cast<int>(header.size()) != k) {
    throw ValidationError("distance CSV header must list exactly the table's " +
                          std::to_string(k) + " category ids");
  }
  const auto idx = id_index(table);
  std::vector<int> col_to_cat(header.size());
  {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto it = idx.find(header[c]);
      if (it == idx.end()) throw ValidationError("unknown category id in header: " + header[c]);
      if (seen[static_cast<std::size_t>(it->second)]) {
        throw ValidationError("duplicate category id in header: " + header[c]);
      }
      seen[static_cast<std::size_t>(it->second)] = 1;
      col_to_cat[c] = it->second;
    }
  }
  if (static_cast<int>(lines.size()) - 1 != k) {
    throw ValidationError("distance CSV must have one row per category");
  }
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
  std::vector<char> row_seen(static_cast<std::size_t>(k), 0);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = split_csv_line(lines[r]);
    if (static_cast<int>(f.size()) != k + 1) {
      throw ValidationError("distance CSV row needs id + " + std::to_string(k) +
                            " values: " + lines[r]);
    }
    const auto it = idx.find(f[0]);
    if (it == idx.end()) throw ValidationError("unknown category id in row: " + f[0]);
    if (row_seen[static_cast<std::size_t>(it->second)]) {
      throw ValidationError("duplicate row for category " + f[0]);
    }
    row_seen[static_cast<std::size_t>(it->second)] = 1;
    for (std::size_t c = 1; c < f.size(); ++c) {
      raw[static_cast<std::size_t>(it->second)][static_cast<std::size_t>(col_to_cat[c - 1])] =
          parse_real(f[c], "distance");
    }
  }
  return load_matrix(raw, table.category_ids());
}

DistanceMatrix read_distance_csv_file(const std::string& path, const ContingencyTable& table) {
  auto in = open_file(path);
  return read_distance_csv(in, table);
}

void write_distance_csv(const DistanceMatrix& d, const std::vector<std::string>& ids,
                        std::ostream& out) {
  for (std::size_t c = 0; c < ids.size(); ++c) {
    if (c) out << ',';
    out << ids[c];
  }
  out << '\n';
  out.precision(17);
  for (int i = 0; i < d.k(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (int j = 0; j < d.k(); ++j) out << ',' << d.at(i, j);
    out << '\n';
  }
}

CategoryGraph read_edge_list(std::istream& in, const ContingencyTable& table) {
  const auto idx = id_index(table);
  std::vector<Edge> edges;
  for (const auto& line : read_lines(in)) {
    const auto f = split_csv_line(line);
    if (f.size() != 2) throw ValidationError("edge list line needs 'u,v': " + line);
    const auto u = idx.find(f[0]);
    const auto v = idx.find(f[1]);
    if (u == idx.end() || v == idx.end()) {
      throw ValidationError("unknown category id in edge: " + line);
    }
    edges.emplace_back(u->second, v->second);
  }
  return CategoryGraph(table.k(), std::move(edges));
}

CategoryGraph read_edge_list_file(const std::string& path, const ContingencyTable& table) {
  auto in = open_file(path);
  return read_edge_list(in, table);
}

void write_edge_csv(const CategoryGraph& g, const std::vector<std::string>& ids,
                    std::ostream& out) {
  for (const auto& [u, v] : g.edges()) {
    out << ids[static_cast<std::size_t>(u)] << ',' << ids[static_cast<std::size_t>(v)] << '\n';
  }
}

void write_edge_dot(const CategoryGraph& g, const ContingencyTable& table, std::ostream& out) {
  out << "graph categories {\n";
  for (int u = 0; u < table.k(); ++u) {
    out << "  n" << u << " [label=\"" << table.category_ids()[static_cast<std::size_t>(u)]
        << "\\n(" << table.count_a(u) << ", " << table.count_b(u) << ")\"];\n";
  }
  for (const auto& [u, v] : g.edges()) {
    out << "  n" << u << " -- n" << v << ";\n";
  }
  out << "}\n";
}

std::string test_result_to_json(const TestResult& result) {
  json j;
  j["statistic"] = result.statistic.value;
  j["kind"] = kind_name(result.statistic.kind);
  if (!result.statistic.note.empty()) j["note"] = result.statistic.note;
  j["mean"] = result.moments ? json(result.moments->mean) : json(nullptr);
  j["variance"] = result.moments ? json(result.moments->variance) : json(nullptr);
  j["z"] = result.z ? json(*result.z) : json(nullptr);
  j["p_normal"] = result.p_normal ? json(*result.p_normal) : json(nullptr);
  j["p_perm"] = result.p_perm ? json(*result.p_perm) : json(nullptr);
  j["B"] = result.b;
  j["seed"] = result.seed;
  if (result.diagnostics) {
    const auto& d = *result.diagnostics;
    j["diagnostics"] = {
        {"flags", d.flags},
        {"ratios",
         {{"hub_node_sum", d.hub_node},
          {"hub_edge_sum", d.hub_edge},
          {"hub_beta6_lambda2", d.hub_beta},
          {"hub_lambda8", d.hub_lambda},
          {"n_over_k", d.n_over_k},
          {"edges_over_k", d.edges_over_k},
          {"inv_margin_over_k", d.inv_m_over_k},
          {"t_hub_sum", d.t_hub_sum}}},
    };
  } else {
    j["diagnostics"] = nullptr;
  }
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

std::string moments_to_json(const ContingencyTable& table, const CategoryGraph& c0) {
  const auto pr = perm_moments_r(table, c0);
  const auto pt = perm_moments_t(table, c0);
  const auto br = bootstrap_moments_r(table, c0);
  json j;
  j["k"] = table.k();
  j["n"] = table.n();
  j["n_a"] = table.n_a();
  j["n_b"] = table.n_b();
  j["edges"] = c0.edge_count();
  j["p1"] = pr.p1;
  j["p2"] = pr.p2;
  j["p3"] = br.p3;
  j["p4"] = br.p4;
  j["r_c0"] = {{"mean", pr.mean}, {"variance", pr.variance}};
  j["t_c0"] = {{"mean", pt.mean}, {"variance", pt.variance}};
  j["bootstrap_r_c0"] = {{"mean", br.mean}, {"variance", br.variance}};
  return j.dump(2) + "\n";
}

void write_power_csv(const PowerTable& table, std::ostream& out) {
  out << "statistic,alpha,power,stderr\n";
  out.precision(17);
  for (const auto& row : table.rows) {
    out << row.statistic << ',' << row.alpha << ',' << row.power << ',' << row.stderr_ << '\n';
  }
}

void write_accuracy_csv(const AccuracyTable& table, std::ostream& out) {
  out << "length,n,statistic,run,p_normal,p_perm,diff\n";
  out.precision(17);
  for (const auto& row : table.rows) {
    out << row.length << ',' << row.n << ',' << row.statistic << ',' << row.run << ','
        << row.p_normal << ',' << row.p_perm << ',' << row.diff << '\n';
  }
}

}  // namespace catgraph
