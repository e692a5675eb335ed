/// @file  trace_io.hpp
/// @brief Line-delimited JSON traces of spatial snapshots
///
/// The first line is a header
/// `{"universe":[...], "period_ms":10, "undirected":false}`; every further
/// line is one step
/// `{"t":k, "nodes":[{"id":..,"kind":..,"attrs":{..}}], "edges":[{"src":..,"w":..,"dst":..}]}`.

#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "strel/error.hpp"
#include "strel/spatial.hpp"

namespace strel {

using json = nlohmann::ordered_json;

struct trace_header {
  std::vector<std::string> universe;
  double period_ms = 10.0;
  bool undirected = false;
  /// Attribute names declared in the header; empty when not declared
  std::vector<std::string> attributes;
};

/// A loaded trace: validated snapshots plus the records they came from
struct trace_file {
  trace_header header;
  std::shared_ptr<const universe> locations;
  std::vector<spatial_model> snapshots;
  json header_record;
  std::vector<json> records;

  [[nodiscard]] std::size_t size() const noexcept { return snapshots.size(); }
};

namespace detail {

inline std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

inline json parse_line(const std::string &text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::exception &e) {
    throw trace_error(at_line(line) + "malformed record: " + e.what());
  }
}

template <class T> T field(const json &obj, const char *key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw trace_error(at_line(line) + "missing field \"" + key + "\"");
  try {
    return it->template get<T>();
  } catch (const json::exception &) {
    throw trace_error(at_line(line) + "field \"" + key + "\" has the wrong type");
  }
}

inline double number(const json &v, const std::string &what, std::size_t line) {
  if (!v.is_number())
    throw trace_error(at_line(line) + what + " is not a number");
  return v.get<double>();
}

} // namespace detail

/// Parses and validates the header record
inline trace_header parse_header(const json &h, std::size_t line = 1) {
  if (!h.is_object())
    throw trace_error(detail::at_line(line) + "header must be an object");
  trace_header out;
  out.universe = detail::field<std::vector<std::string>>(h, "universe", line);
  if (out.universe.empty())
    throw trace_error(detail::at_line(line) + "universe is empty");
  if (h.contains("period_ms")) {
    out.period_ms = detail::number(h["period_ms"], "period_ms", line);
    if (!(out.period_ms > 0))
      throw trace_error(detail::at_line(line) + "period_ms must be positive");
  }
  if (h.contains("undirected"))
    out.undirected = detail::field<bool>(h, "undirected", line);
  if (h.contains("attributes"))
    out.attributes = detail::field<std::vector<std::string>>(h, "attributes", line);
  return out;
}

inline json header_record(const trace_header &h) {
  json j;
  j["universe"] = h.universe;
  j["period_ms"] = h.period_ms;
  j["undirected"] = h.undirected;
  if (!h.attributes.empty())
    j["attributes"] = h.attributes;
  return j;
}

/// Validates one step record against the header
inline spatial_model parse_record(const json &r, const trace_header &h,
                                  const std::shared_ptr<const universe> &locs,
                                  std::size_t expected_t, std::size_t line) {
  using detail::at_line;
  if (!r.is_object())
    throw trace_error(at_line(line) + "record must be an object");
  if (r.contains("t") && !r["t"].is_number_integer())
    throw trace_error(at_line(line) + "step index must be an integer");
  auto t = detail::field<std::int64_t>(r, "t", line);
  if (t < 0 || static_cast<std::size_t>(t) != expected_t)
    throw trace_error(at_line(line) + "step index " + std::to_string(t) + " out of order, expected " +
                      std::to_string(expected_t));
  const json &nodes = r.contains("nodes") ? r["nodes"] : json();
  if (!nodes.is_array())
    throw trace_error(at_line(line) + "field \"nodes\" must be an array");

  std::vector<raw_node> raw_nodes;
  std::set<std::string> ids;
  for (const auto &n : nodes) {
    if (!n.is_object())
      throw trace_error(at_line(line) + "node record must be an object");
    raw_node rn;
    rn.id = detail::field<std::string>(n, "id", line);
    rn.kind = n.contains("kind") ? detail::field<std::string>(n, "kind", line) : std::string();
    if (n.contains("attrs")) {
      const json &a = n["attrs"];
      if (!a.is_object())
        throw trace_error(at_line(line) + "attrs of '" + rn.id + "' must be an object");
      for (const auto &[k, v] : a.items()) {
        if (!h.attributes.empty() &&
            std::find(h.attributes.begin(), h.attributes.end(), k) == h.attributes.end())
          throw trace_error(at_line(line) + "attribute '" + k + "' is not declared in the header");
        rn.attrs.emplace_back(k, detail::number(v, "attribute '" + k + "'", line));
      }
    }
    ids.insert(rn.id);
    raw_nodes.push_back(std::move(rn));
  }

  std::vector<std::string> missing, extra;
  for (const auto &id : locs->ids())
    if (!ids.count(id))
      missing.push_back(id);
  for (const auto &id : ids)
    if (!locs->find(id))
      extra.push_back(id);
  if (!missing.empty() || !extra.empty()) {
    std::string msg = at_line(line) + "universe drift at t=" + std::to_string(t) + ":";
    for (const auto &m : missing)
      msg += " missing '" + m + "'";
    for (const auto &e : extra)
      msg += " unknown '" + e + "'";
    throw trace_error(msg);
  }

  std::vector<raw_edge> raw_edges;
  if (r.contains("edges")) {
    const json &edges = r["edges"];
    if (!edges.is_array())
      throw trace_error(at_line(line) + "field \"edges\" must be an array");
    for (const auto &e : edges) {
      if (!e.is_object())
        throw trace_error(at_line(line) + "edge record must be an object");
      raw_edges.push_back({detail::field<std::string>(e, "src", line),
                           detail::number(e.contains("w") ? e["w"] : json(), "edge weight \"w\"", line),
                           detail::field<std::string>(e, "dst", line)});
    }
  }
  if (h.undirected) {
    std::set<std::pair<std::string, std::string>> listed;
    for (const auto &e : raw_edges)
      listed.emplace(e.src, e.dst);
    const std::size_t n = raw_edges.size();
    for (std::size_t i = 0; i < n; ++i) {
      const raw_edge e = raw_edges[i];
      if (e.src != e.dst && !listed.count({e.dst, e.src}))
        raw_edges.push_back({e.dst, e.weight, e.src});
    }
  }
  try {
    return validate_model(locs, std::move(raw_nodes), std::move(raw_edges),
                          static_cast<std::size_t>(t));
  } catch (const model_error &e) {
    throw trace_error(at_line(line) + e.what());
  }
}

/// Streams snapshots one line at a time, for online monitoring
class trace_reader {
public:
  explicit trace_reader(std::istream &in) : _in(&in) {
    std::string text;
    if (!next_line(text))
      throw trace_error("trace is empty: no header record");
    _header_record = detail::parse_line(text, _line);
    _header = parse_header(_header_record, _line);
    try {
      _locations = std::make_shared<const universe>(_header.universe);
    } catch (const model_error &e) {
      throw trace_error(detail::at_line(_line) + e.what());
    }
  }

  [[nodiscard]] const trace_header &header() const noexcept { return _header; }
  [[nodiscard]] const json &header_record() const noexcept { return _header_record; }
  [[nodiscard]] const std::shared_ptr<const universe> &locations() const noexcept {
    return _locations;
  }
  /// The record behind the snapshot most recently returned by `next`
  [[nodiscard]] const json &last_record() const noexcept { return _record; }

  /// Next snapshot, or nothing at end of input
  std::optional<spatial_model> next() {
    std::string text;
    if (!next_line(text))
      return std::nullopt;
    _record = detail::parse_line(text, _line);
    spatial_model m = parse_record(_record, _header, _locations, _count, _line);
    ++_count;
    return m;
  }

private:
  bool next_line(std::string &text) {
    while (std::getline(*_in, text)) {
      ++_line;
      if (text.find_first_not_of(" \t\r") != std::string::npos)
        return true;
    }
    return false;
  }

  std::istream *_in;
  std::size_t _line = 0;
  std::size_t _count = 0;
  trace_header _header;
  json _header_record;
  json _record;
  std::shared_ptr<const universe> _locations;
};

inline trace_file read_trace(std::istream &in) {
  trace_reader reader(in);
  trace_file out;
  out.header = reader.header();
  out.header_record = reader.header_record();
  out.locations = reader.locations();
  while (auto m = reader.next()) {
    out.snapshots.push_back(std::move(*m));
    out.records.push_back(reader.last_record());
  }
  if (out.snapshots.empty())
    throw trace_error("trace has no step records");
  return out;
}

inline trace_file load_trace(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw trace_error("cannot open trace file '" + path + "'");
  return read_trace(in);
}

inline void save_trace(const trace_file &f, std::ostream &out) {
  out << f.header_record.dump() << '\n';
  for (const auto &r : f.records)
    out << r.dump() << '\n';
}

inline void save_trace(const trace_file &f, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw trace_error("cannot write trace file '" + path + "'");
  save_trace(f, out);
}

/// Record for one snapshot in the trace format (edges listed as stored)
inline json snapshot_record(const spatial_model &s) {
  json r;
  r["t"] = s.time_index();
  json nodes = json::array();
  for (location l = 0; l < s.size(); ++l) {
    json n;
    n["id"] = s.locations().name(l);
    n["kind"] = s.kind(l);
    json attrs = json::object();
    for (const auto &[k, v] : s.attributes(l))
      attrs[k] = v;
    n["attrs"] = std::move(attrs);
    nodes.push_back(std::move(n));
  }
  r["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto &e : s.edges())
    edges.push_back(
        {{"src", s.locations().name(e.src)}, {"w", e.weight}, {"dst", s.locations().name(e.dst)}});
  r["edges"] = std::move(edges);
  return r;
}

} // namespace strel
