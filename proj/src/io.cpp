#include "hiercons/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hiercons/error.hpp"

namespace hiercons::io {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::size_t parse_label(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("bad cluster label '" + s + "'", line);
  }
  return v;
}

bool parse_double(const std::string& s, double& v) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

void write_partition_csv(std::ostream& out, const Partition& p) {
  out << "cluster\n";
  for (const auto c : p.labels()) out << c << '\n';
}

Partition read_partition_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> labels;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto cells = split_csv(line);
    if (!header_checked) {
      header_checked = true;
      double ignored;
      if (cells.size() == 1 && !parse_double(cells[0], ignored)) continue;
    }
    if (cells.size() != 1) throw ParseError("partition CSV must have exactly one column", lineno);
    labels.push_back(parse_label(cells[0], lineno));
  }
  if (labels.empty()) throw ParseError("partition CSV has no rows", lineno);
  return Partition(labels);
}

void write_ensemble_csv(std::ostream& out, const PartitionEnsemble& e) {
  e.validate();
  for (std::size_t t = 0; t < e.size(); ++t) {
    if (t) out << ',';
    if (e.gammas.empty()) {
      out << 't' << t;
    } else {
      out << fmt(e.gammas[t]);
    }
  }
  out << '\n';
  for (std::size_t i = 0; i < e.num_nodes(); ++i) {
    for (std::size_t t = 0; t < e.size(); ++t) {
      if (t) out << ',';
      out << e.partitions[t][i];
    }
    out << '\n';
  }
}

PartitionEnsemble read_ensemble_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) header = split_csv(line);
  }
  if (header.empty()) throw ParseError("ensemble CSV is empty", lineno);
  const auto l = header.size();
  std::vector<double> gammas(l);
  bool numeric = true;
  for (std::size_t t = 0; t < l; ++t) numeric = numeric && parse_double(header[t], gammas[t]);
  if (!numeric) gammas.clear();

  std::vector<std::vector<std::size_t>> columns(l);
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != l) {
      throw ParseError("expected " + std::to_string(l) + " columns, found " + std::to_string(cells.size()), lineno);
    }
    for (std::size_t t = 0; t < l; ++t) columns[t].push_back(parse_label(cells[t], lineno));
  }
  if (columns.front().empty()) throw ParseError("ensemble CSV has no node rows", lineno);
  PartitionEnsemble e;
  e.gammas = std::move(gammas);
  for (const auto& col : columns) e.partitions.emplace_back(col);
  return e;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << fmt(row[j]);
    }
    out << '\n';
  }
}

namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

}  // namespace

void write_matrix_binary(std::ostream& out, const DenseMatrix& m) {
  const auto n = to_little(static_cast<std::uint64_t>(m.size()));
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const double x : m.data()) {
    const auto bits = to_little(std::bit_cast<std::uint64_t>(x));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

DenseMatrix read_matrix_binary(std::istream& in) {
  std::uint64_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) throw ParseError("matrix file has no header", 0);
  n = to_little(n);
  DenseMatrix m(static_cast<std::size_t>(n));
  for (auto& x : m.data()) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw ParseError("matrix file is truncated", 0);
    x = std::bit_cast<double>(to_little(bits));
  }
  return m;
}

nlohmann::json tree_to_json(const ConsensusTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& v : t.nodes()) {
    nlohmann::json j;
    j["id"] = v.id;
    j["parent"] = v.parent ? nlohmann::json(*v.parent) : nlohmann::json(nullptr);
    j["children"] = v.children;
    j["members"] = v.members;
    j["strength"] = v.strength;
    nodes.push_back(std::move(j));
  }
  return {{"format", "hiercons-tree"}, {"version", kTreeFormatVersion}, {"num_items", t.num_items()},
          {"nodes", std::move(nodes)}};
}

ConsensusTree tree_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "hiercons-tree") throw ParseError("not a consensus tree document", 0);
    if (j.at("version").get<int>() != kTreeFormatVersion) throw ParseError("unsupported tree format version", 0);
    std::vector<TreeNode> nodes;
    for (const auto& jn : j.at("nodes")) {
      TreeNode v;
      v.id = jn.at("id").get<std::size_t>();
      if (!jn.at("parent").is_null()) v.parent = jn.at("parent").get<std::size_t>();
      v.children = jn.at("children").get<std::vector<std::size_t>>();
      v.members = jn.at("members").get<std::vector<std::size_t>>();
      v.strength = jn.at("strength").get<double>();
      nodes.push_back(std::move(v));
    }
    return ConsensusTree(j.at("num_items").get<std::size_t>(), std::move(nodes));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed tree document: ") + ex.what(), 0);
  }
}

void write_tree_csv(std::ostream& out, const ConsensusTree& t) {
  const auto leaf = t.leaf_partition();
  const auto coarse = t.coarse_partition();
  out << "node_id,leaf_cluster,coarse_cluster\n";
  for (std::size_t i = 0; i < t.num_items(); ++i) out << i << ',' << leaf[i] << ',' << coarse[i] << '\n';
}

void write_node_map_csv(std::ostream& out, const std::vector<std::string>& ids) {
  out << "original_id,internal_id\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << i << '\n';
}

void write_event_table_csv(std::ostream& out, const EventProfile& profile) {
  out << "gamma,beta\n0,0\n";
  for (const auto& ev : profile.events()) out << fmt(ev.gamma) << ',' << fmt(profile.beta(ev.gamma)) << '\n';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw Error("cannot write " + path.string());
  }
}

}  // namespace hiercons::io
