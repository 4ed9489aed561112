#include "rsn/records.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rsn/error.hpp"
#include "rsn/oracle.hpp"

#ifndef RSN_VERSION
#define RSN_VERSION "0.0.0"
#endif

namespace rsn {

using nlohmann::json;

namespace {

json parse_object(const std::string& line, const char* schema) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  if (!j.contains("schema") || !j["schema"].is_string()) throw ValidationError("record has no schema tag");
  if (j["schema"].get<std::string>() != schema)
    throw ValidationError("unsupported schema '" + j["schema"].get<std::string>() + "', expected '" + schema + "'");
  return j;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("record lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("record field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string to_jsonl(const TableauRecord& rec) {
  const Shape& s = rec.filling.shape();
  json cells = json::array();
  for (const auto& [z, r] : rec.filling.entries()) {
    json c{{"x", z.x}, {"y", z.y}, {"rank", r}};
    if (!rec.times.empty()) c["time"] = rec.times[static_cast<std::size_t>(r - 1)];
    cells.push_back(std::move(c));
  }
  json j{{"schema", kTableauSchema}, {"seed", rec.seed}, {"replica", rec.replica},
         {"n", s.order()},           {"c", s.center()}, {"cells", std::move(cells)}};
  return j.dump();
}

TableauRecord parse_tableau(const std::string& line) {
  const json j = parse_object(line, kTableauSchema);
  const int n = field<int>(j, "n");
  const int c = field<int>(j, "c");
  if (n < 2) throw ValidationError("record order must be >= 2");
  const Shape shape = Shape::staircase(c, n);
  const auto cells = field<json>(j, "cells");
  if (!cells.is_array()) throw ValidationError("'cells' must be an array");
  std::vector<std::pair<Cell, int>> entries;
  std::vector<std::pair<int, double>> timed;
  for (const auto& e : cells) {
    const Cell z{field<int>(e, "x"), field<int>(e, "y")};
    if (!shape.contains(z)) throw ValidationError("cell " + to_string(z) + " lies outside " + shape.describe());
    const int r = field<int>(e, "rank");
    entries.emplace_back(z, r);
    if (e.contains("time")) timed.emplace_back(r, field<double>(e, "time"));
  }
  TableauRecord rec{j.value("seed", std::uint64_t{0}), j.value("replica", std::uint64_t{0}),
                    StandardFilling::from_entries(shape, entries), {}};
  if (!timed.empty()) {
    if (timed.size() != entries.size()) throw ValidationError("times must be given for all cells or none");
    rec.times.assign(entries.size(), 0.0);
    for (const auto& [r, t] : timed) rec.times[static_cast<std::size_t>(r - 1)] = t;
    for (std::size_t k = 1; k < rec.times.size(); ++k)
      if (!(rec.times[k] > rec.times[k - 1])) throw ValidationError("times do not increase with rank");
  }
  return rec;
}

std::string to_jsonl(const SortingNetwork& net) {
  json j{{"schema", kNetworkSchema}, {"n", net.order}, {"c", net.center}, {"word", net.word}};
  if (!net.times.empty()) j["times"] = net.times;
  return j.dump();
}

SortingNetwork parse_network(const std::string& line) {
  const json j = parse_object(line, kNetworkSchema);
  SortingNetwork net;
  net.order = field<int>(j, "n");
  net.center = field<int>(j, "c");
  net.word = field<std::vector<int>>(j, "word");
  if (j.contains("times")) net.times = field<std::vector<double>>(j, "times");
  return net;
}

TableauRecord tableau_record(const InclusionFunction& f, std::uint64_t seed, std::uint64_t replica, bool with_times) {
  std::vector<Cell> order;
  std::vector<double> times;
  for (const auto& e : f.entries()) {
    order.push_back(e.cell);
    times.push_back(e.time);
  }
  TableauRecord rec{seed, replica, StandardFilling::from_order(f.shape(), order), {}};
  if (with_times) rec.times = std::move(times);
  return rec;
}

std::string hex_digest(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return hex_digest(fnv1a(ss.str()));
}

std::string code_version() { return RSN_VERSION; }

std::string to_json(const RunManifest& m) {
  json outs = json::array();
  for (const auto& [p, d] : m.outputs) outs.push_back({{"path", p}, {"fnv1a64", d}});
  json j{{"schema", kManifestSchema}, {"subcommand", m.subcommand}, {"config", m.config},
         {"seed", m.seed},            {"version", code_version()},   {"outputs", std::move(outs)}};
  return j.dump(2);
}

std::string write_manifest(const RunManifest& m, const std::string& primary_output) {
  const std::string path = primary_output + ".manifest.json";
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << to_json(m) << '\n';
  return path;
}

}  // namespace rsn
