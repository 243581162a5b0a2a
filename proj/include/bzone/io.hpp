#pragma once
// File formats: flat key-value scene/config files, CSV for simulated data and
// weighted samples, JSON for estimate reports. All floating-point output uses
// %.17g so every format round-trips bit-exactly.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bzone/convex_dp.hpp"
#include "bzone/kernel.hpp"
#include "bzone/metrics.hpp"
#include "bzone/scene.hpp"
#include "bzone/tau.hpp"

#include "json.hpp"

namespace bzone {

inline constexpr const char* kVersionString = "0.1.0";

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error(what + ": expected a number, got '" + s + "'");
  return v;
}

inline long parse_int(const std::string& s, const std::string& what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw std::runtime_error(what + ": expected an integer, got '" + s + "'");
  return v;
}

// Flat key-value text: one `key = value` per line, '#' starts a comment.
// Entry order is preserved so emitted files round-trip verbatim.
struct KvFile {
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const {
    for (const auto& e : entries)
      if (e.first == key) return true;
    return false;
  }

  const std::string& get(const std::string& key) const {
    for (const auto& e : entries)
      if (e.first == key) return e.second;
    throw std::runtime_error("missing key '" + key + "'");
  }

  std::string get_or(const std::string& key, std::string fallback) const {
    for (const auto& e : entries)
      if (e.first == key) return e.second;
    return fallback;
  }

  double number(const std::string& key) const { return parse_double(get(key), "key '" + key + "'"); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  void set(const std::string& key, std::string value) {
    for (auto& e : entries)
      if (e.first == key) {
        e.second = std::move(value);
        return;
      }
    entries.emplace_back(key, std::move(value));
  }
};

namespace iodetail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace iodetail

inline KvFile parse_kv(const std::string& text) {
  KvFile kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = iodetail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = iodetail::trim(line.substr(0, eq));
    const std::string value = iodetail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
    kv.entries.emplace_back(key, value);
  }
  return kv;
}

inline std::string kv_to_text(const KvFile& kv) {
  std::string out;
  for (const auto& e : kv.entries) out += e.first + " = " + e.second + "\n";
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

// FNV-1a over the raw bytes; used to stamp reports with input digests.
inline std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- scene files -----------------------------------------------------------

inline std::string design_to_value(const Design& d) {
  if (d.is_uniform()) return "uniform";
  std::string out = "grid:" + std::to_string(d.side) + ":";
  for (std::size_t i = 0; i < d.cell_mass.size(); ++i) {
    if (i) out += ",";
    out += fmt_g17(d.cell_mass[i]);
  }
  return out;
}

inline Design design_from_value(const std::string& v) {
  if (v == "uniform") return Design::uniform();
  if (v.rfind("grid:", 0) != 0)
    throw std::runtime_error("key 'design': expected 'uniform' or 'grid:<side>:<masses>'");
  const auto parts = iodetail::split(v, ':');
  if (parts.size() != 3) throw std::runtime_error("key 'design': malformed grid spec");
  const long side = parse_int(parts[1], "design side");
  const auto cells = iodetail::split(parts[2], ',');
  std::vector<double> mass;
  mass.reserve(cells.size());
  for (const auto& c : cells) mass.push_back(parse_double(c, "design mass"));
  Design d = Design::density_grid(static_cast<int>(side), mass);
  // density_grid renormalizes; skip that when the table is already normalized
  // so emitted files parse back to bit-identical masses.
  double total = 0.0;
  for (double m : mass) total += m;
  if (std::abs(total - 1.0) < 1e-12) d.cell_mass = std::move(mass);
  return d;
}

inline std::string scene_to_config(const GroundTruthScene& scene) {
  KvFile kv;
  if (const auto* d = std::get_if<Disc>(&scene.s0)) {
    kv.set("shape", "disc");
    kv.set("cx", fmt_g17(d->center.x));
    kv.set("cy", fmt_g17(d->center.y));
    kv.set("r", fmt_g17(d->radius));
  } else if (const auto* e = std::get_if<Ellipse>(&scene.s0)) {
    kv.set("shape", "ellipse");
    kv.set("cx", fmt_g17(e->center.x));
    kv.set("cy", fmt_g17(e->center.y));
    kv.set("rx", fmt_g17(e->rx));
    kv.set("ry", fmt_g17(e->ry));
  } else {
    const auto& poly = std::get<ConvexPolygon>(scene.s0);
    kv.set("shape", "polygon");
    std::string verts;
    for (const Point& p : poly.vertices()) {
      if (!verts.empty()) verts += " ";
      verts += fmt_g17(p.x) + " " + fmt_g17(p.y);
    }
    kv.set("vertices", verts);
  }
  kv.set("tau0", fmt_g17(scene.tau0));
  kv.set("C0", fmt_g17(scene.c0));
  kv.set("p", fmt_g17(scene.p));
  kv.set("kappa0", fmt_g17(scene.kappa0));
  kv.set("delta0", fmt_g17(scene.delta0));
  kv.set("sigma0", fmt_g17(scene.sigma0));
  kv.set("eps0", fmt_g17(scene.eps0));
  kv.set("design", design_to_value(scene.design));
  kv.set("noise", noise_law_name(scene.noise));
  return kv_to_text(kv);
}

inline GroundTruthScene scene_from_config(const std::string& text) {
  const KvFile kv = parse_kv(text);
  static const char* known[] = {"shape", "cx",     "cy",     "r",      "rx",
                                "ry",    "vertices", "tau0",   "C0",     "p",
                                "kappa0", "delta0", "sigma0", "eps0",   "design",
                                "noise"};
  for (const auto& e : kv.entries) {
    bool ok = false;
    for (const char* k : known) ok = ok || e.first == k;
    if (!ok) throw std::runtime_error("scene: unknown key '" + e.first + "'");
  }
  GroundTruthScene scene;
  const std::string shape = kv.get("shape");
  if (shape == "disc") {
    scene.s0 = Disc{{kv.number("cx"), kv.number("cy")}, kv.number("r")};
  } else if (shape == "ellipse") {
    scene.s0 = Ellipse{{kv.number("cx"), kv.number("cy")}, kv.number("rx"), kv.number("ry")};
  } else if (shape == "polygon") {
    const auto toks = iodetail::split(kv.get("vertices"), ' ');
    if (toks.size() < 6 || toks.size() % 2 != 0)
      throw std::runtime_error("scene: polygon needs >= 3 x y vertex pairs");
    std::vector<Point> verts;
    for (std::size_t i = 0; i < toks.size(); i += 2)
      verts.push_back({parse_double(toks[i], "vertex x"), parse_double(toks[i + 1], "vertex y")});
    scene.s0 = ConvexPolygon::from_ccw_vertices(verts);
  } else {
    throw std::runtime_error("scene: unknown shape '" + shape + "'");
  }
  scene.tau0 = kv.number("tau0");
  scene.c0 = kv.number("C0");
  scene.p = kv.number("p");
  scene.kappa0 = kv.number("kappa0");
  scene.delta0 = kv.number("delta0");
  scene.sigma0 = kv.number("sigma0");
  scene.eps0 = kv.number_or("eps0", scene.eps0);
  scene.design = design_from_value(kv.get("design"));
  if (kv.has("noise")) scene.noise = parse_noise_law(kv.get("noise"));
  scene.finalize();
  return scene;
}

// ---- CSV data files --------------------------------------------------------

// Header comment carries key=value pairs; the parsers only look at those.
inline KvFile parse_csv_header(const std::string& line, const std::string& tag) {
  if (line.empty() || line[0] != '#')
    throw std::runtime_error(tag + ": missing header comment line");
  KvFile kv;
  for (const auto& tok : iodetail::split(iodetail::trim(line.substr(1)), ' ')) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos) continue;  // the format tag word
    kv.entries.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return kv;
}

inline std::string dose_to_csv(const DoseResponseData& data) {
  std::string out = "# dose-response m=" + std::to_string(data.m) +
                    " n=" + std::to_string(data.points.size()) +
                    " sigma0=" + fmt_g17(data.sigma0) + "\n";
  out += "x,y,mean\n";
  for (std::size_t i = 0; i < data.points.size(); ++i)
    out += fmt_g17(data.points[i].x) + "," + fmt_g17(data.points[i].y) + "," +
           fmt_g17(data.replicate_means[i]) + "\n";
  return out;
}

inline DoseResponseData dose_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dose csv: empty file");
  const KvFile hdr = parse_csv_header(line, "dose csv");
  DoseResponseData data;
  data.m = static_cast<int>(parse_int(hdr.get("m"), "dose csv m"));
  data.sigma0 = hdr.number_or("sigma0", 0.0);
  if (data.m < 1) throw std::runtime_error("dose csv: m must be >= 1");
  if (!std::getline(in, line) || iodetail::trim(line) != "x,y,mean")
    throw std::runtime_error("dose csv: expected column line 'x,y,mean'");
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (iodetail::trim(line).empty()) continue;
    const auto cols = iodetail::split(line, ',');
    if (cols.size() != 3)
      throw std::runtime_error("dose csv line " + std::to_string(lineno) + ": expected 3 columns");
    const std::string where = "dose csv line " + std::to_string(lineno);
    data.points.push_back({parse_double(cols[0], where), parse_double(cols[1], where)});
    data.replicate_means.push_back(parse_double(cols[2], where));
  }
  if (data.points.empty()) throw std::runtime_error("dose csv: no data rows");
  return data;
}

inline std::string grid_to_csv(const GridData& data) {
  std::string out = "# grid m=" + std::to_string(data.m) + " sigma0=" + fmt_g17(data.sigma0) + "\n";
  for (int k = 0; k < data.m; ++k) {
    for (int l = 0; l < data.m; ++l) {
      if (l) out += ",";
      out += fmt_g17(data.at(k, l));
    }
    out += "\n";
  }
  return out;
}

inline GridData grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("grid csv: empty file");
  const KvFile hdr = parse_csv_header(line, "grid csv");
  GridData data;
  data.m = static_cast<int>(parse_int(hdr.get("m"), "grid csv m"));
  data.sigma0 = hdr.number_or("sigma0", 0.0);
  if (data.m < 2) throw std::runtime_error("grid csv: m must be >= 2");
  data.responses.reserve(static_cast<std::size_t>(data.m) * data.m);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (iodetail::trim(line).empty()) continue;
    const auto cols = iodetail::split(line, ',');
    if (static_cast<int>(cols.size()) != data.m)
      throw std::runtime_error("grid csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(data.m) + " columns");
    for (const auto& c : cols)
      data.responses.push_back(parse_double(c, "grid csv line " + std::to_string(lineno)));
  }
  if (static_cast<int>(data.responses.size()) != data.m * data.m)
    throw std::runtime_error("grid csv: expected " + std::to_string(data.m) + " rows");
  return data;
}

inline std::string weights_to_csv(const WeightedSample& sample, double tau_hat, int m) {
  std::string out = "# weighted-sample gamma=" + fmt_g17(sample.gamma) +
                    " tau_hat=" + fmt_g17(tau_hat) + " m=" + std::to_string(m) +
                    " denom=" + fmt_g17(sample.denom) + "\n";
  out += "x,y,weight\n";
  for (std::size_t i = 0; i < sample.points.size(); ++i)
    out += fmt_g17(sample.points[i].x) + "," + fmt_g17(sample.points[i].y) + "," +
           fmt_g17(sample.weights[i]) + "\n";
  return out;
}

inline WeightedSample weights_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("weights csv: empty file");
  const KvFile hdr = parse_csv_header(line, "weights csv");
  WeightedSample sample;
  sample.gamma = hdr.number("gamma");
  sample.denom = hdr.number("denom");
  if (!std::getline(in, line) || iodetail::trim(line) != "x,y,weight")
    throw std::runtime_error("weights csv: expected column line 'x,y,weight'");
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (iodetail::trim(line).empty()) continue;
    const auto cols = iodetail::split(line, ',');
    if (cols.size() != 3)
      throw std::runtime_error("weights csv line " + std::to_string(lineno) +
                               ": expected 3 columns");
    const std::string where = "weights csv line " + std::to_string(lineno);
    sample.points.push_back({parse_double(cols[0], where), parse_double(cols[1], where)});
    sample.weights.push_back(parse_double(cols[2], where));
  }
  return sample;
}

// ---- JSON reports ----------------------------------------------------------

// Vertex list in CCW order starting at the lexicographically smallest vertex
// (the stored canonical order).
inline nlohmann::json polygon_to_json(const ConvexPolygon& poly) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Point& p : poly.vertices()) arr.push_back({p.x, p.y});
  return arr;
}

inline ConvexPolygon polygon_from_json(const nlohmann::json& arr) {
  std::vector<Point> verts;
  for (const auto& v : arr) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  if (verts.empty()) return ConvexPolygon{};
  return ConvexPolygon::hull_of(std::move(verts));
}

inline nlohmann::json optimizer_to_json(const OptimizerResult& r) {
  return {{"vertices", polygon_to_json(r.polygon)},
          {"criterion", r.criterion},
          {"base_index", r.base_vertex},
          {"included_count", r.included_indices.size()},
          {"elapsed_ms", r.elapsed_ms}};
}

inline nlohmann::json tau_to_json(const TauFit& fit) {
  return {{"tau_init", fit.tau_init},
          {"tau_refined", fit.tau_refined},
          {"iterations", fit.iterations},
          {"delta_thin", fit.delta_thin},
          {"converged", fit.converged}};
}

struct EstimateReport {
  std::string scene_digest;  // empty when no scene was supplied
  std::string data_digest;
  nlohmann::json config = nlohmann::json::object();
  bool has_tau = false;
  TauFit tau;
  OptimizerResult optimizer;
  bool has_metrics = false;
  double d = 0.0;
  DesignDistance d_f;
  HausdorffDistance hausdorff;
  double wall_clock_ms = 0.0;
};

inline nlohmann::json report_to_json(const EstimateReport& rep) {
  nlohmann::json j{{"version", kVersionString},
                   {"data_digest", rep.data_digest},
                   {"config", rep.config},
                   {"optimizer", optimizer_to_json(rep.optimizer)},
                   {"wall_clock_ms", rep.wall_clock_ms}};
  if (!rep.scene_digest.empty()) j["scene_digest"] = rep.scene_digest;
  if (rep.has_tau) j["tau"] = tau_to_json(rep.tau);
  if (rep.has_metrics) {
    j["metrics"] = {{"d", rep.d},
                    {"d_F", rep.d_f.value},
                    {"d_F_se", rep.d_f.se}};
    // JSON has no +infinity; an empty estimate is flagged and its distance is null.
    if (rep.hausdorff.empty_estimate) {
      j["metrics"]["hausdorff"] = nullptr;
      j["metrics"]["empty_estimate"] = true;
    } else {
      j["metrics"]["hausdorff"] = rep.hausdorff.value;
    }
  }
  return j;
}

}  // namespace bzone
