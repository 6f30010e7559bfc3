#include "spinlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinlab/barrier.hpp"
#include "spinlab/chains.hpp"
#include "spinlab/constants.hpp"
#include "spinlab/entmeas.hpp"
#include "spinlab/errors.hpp"
#include "spinlab/multiscatter.hpp"
#include "spinlab/scatter.hpp"

namespace spinlab::cli {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Schema {
  std::map<std::string, double> numeric_defaults;
  std::map<std::string, std::string> option_defaults;
  std::set<std::string> sweepable;
};

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s = {
      {"scatter-two",
       {{{"N", 10}, {"lambda", 1}, {"b_z", 0}, {"tau", 0}, {"tau_f_prime", 0}, {"alpha", 1}, {"beta", 0}},
        {{"initial", "A"}, {"coupling", "isotropic"}},
        {"tau", "b_z", "tau_f_prime", "alpha"}}},
      {"scatter-many",
       {{{"N", 10}, {"lambda", 1}, {"b_z", 0}, {"tau", 0}, {"tau_f_prime", 0}, {"alpha", 1}, {"beta", 0},
         {"k", 4}, {"m", 1}, {"n", 2}},
        {{"initial", "A"}, {"coupling", "isotropic"}},
        {"tau", "b_z", "n"}}},
      {"barrier",
       {{{"big_l", 40}, {"l", 10}, {"b_z", 0.05}, {"k0", 10.0 * M_PI / 40.0}, {"x0", -8},
         {"w", 2}, {"n_modes", 257}, {"x_out", 16}, {"t", 20}},
        {},
        {"t", "x_out", "b_z"}}},
      {"chain-transfer",
       {{{"n", 4}, {"strength", 1}, {"s", 1}, {"r", 0}, {"encoded_k", 1}, {"t", 0},
         {"i", 0}, {"f", 0}, {"delta", 1}},
        {{"coupling", "dipolar"}},
        {"t"}}},
      {"ring-transfer",
       {{{"n", 6}, {"strength", 1}, {"s", 1}, {"r", 0}, {"t", 0}},
        {{"coupling", "dipolar"}},
        {"t"}}},
      {"robustness",
       {{{"l", 3}, {"p", 0.03}, {"iterations", 1000}, {"threshold", 2.0 / 3.0}},
        {},
        {"p", "threshold"}}},
  };
  return s;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& schema_map = schemas();
  auto it = schema_map.find(cfg.experiment);
  if (it == schema_map.end()) throw ConfigError("unknown experiment: " + cfg.experiment);
  const Schema& schema = it->second;
  if (schema.option_defaults.count(key)) {
    cfg.options[key] = value;
    return;
  }
  if (!schema.numeric_defaults.count(key))
    throw ConfigError("unknown parameter '" + key + "' for experiment " + cfg.experiment);
  try {
    std::size_t used = 0;
    cfg.params[key] = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw ConfigError("parameter '" + key + "' expects a number, got '" + value + "'");
  }
}

SweepAxis parse_sweep(const std::string& text) {
  SweepAxis sw;
  std::stringstream ss(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) throw ConfigError("sweep expects name:start:stop:steps");
  sw.name = parts[0];
  try {
    sw.start = std::stod(parts[1]);
    sw.stop = std::stod(parts[2]);
    sw.steps = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw ConfigError("sweep bounds must be numeric: " + text);
  }
  if (sw.steps < 1) throw ConfigError("sweep steps must be at least 1");
  return sw;
}

void finalize(ExperimentConfig& cfg) {
  const auto& schema_map = schemas();
  auto it = schema_map.find(cfg.experiment);
  if (it == schema_map.end()) throw ConfigError("unknown experiment: " + cfg.experiment);
  const Schema& schema = it->second;
  for (const auto& [k, v] : schema.numeric_defaults)
    if (!cfg.params.count(k)) cfg.params[k] = v;
  for (const auto& [k, v] : schema.option_defaults)
    if (!cfg.options.count(k)) cfg.options[k] = v;
  if (cfg.sweep && !schema.sweepable.count(cfg.sweep->name))
    throw ConfigError("parameter '" + cfg.sweep->name + "' is not sweepable for " + cfg.experiment);
  for (const auto& f : cfg.formats)
    if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown format: " + f);
}

scatter::ScatterConfig scatter_config_from(const ExperimentConfig& cfg) {
  scatter::ScatterConfig sc;
  sc.n_spins = int(cfg.params.at("N"));
  sc.lambda = cfg.params.at("lambda");
  sc.b_z = cfg.params.at("b_z");
  sc.tau = cfg.params.at("tau");
  sc.tau_f_prime = cfg.params.at("tau_f_prime");
  const std::string& initial = cfg.options.at("initial");
  if (initial == "A") {
    sc.initial = scatter::Initial::A;
  } else if (initial == "B") {
    sc.initial = scatter::Initial::B;
    double a = cfg.params.at("alpha");
    double b = cfg.params.at("beta");
    if (b == 0.0 && std::abs(a) <= 1.0) b = std::sqrt(1.0 - a * a);
    sc.alpha = a;
    sc.beta = b;
  } else {
    throw ConfigError("initial must be A or B");
  }
  const std::string& coupling = cfg.options.at("coupling");
  if (coupling == "isotropic") sc.coupling = scatter::Coupling::Isotropic;
  else if (coupling == "xy") sc.coupling = scatter::Coupling::XY;
  else throw ConfigError("coupling must be isotropic or xy");
  return sc;
}

chains::ChainSpec chain_spec_from(const ExperimentConfig& cfg, chains::Geometry geometry) {
  chains::ChainSpec spec;
  spec.geometry = geometry;
  spec.n = int(cfg.params.at("n"));
  spec.strength = cfg.params.at("strength");
  const std::string& coupling = cfg.options.at("coupling");
  if (coupling == "heisenberg") spec.coupling = chains::CouplingModel::Heisenberg;
  else if (coupling == "dipolar") spec.coupling = chains::CouplingModel::Dipolar;
  else throw ConfigError("coupling must be heisenberg or dipolar");
  if (geometry == chains::Geometry::Open) {
    const int i = int(cfg.params.at("i")), f = int(cfg.params.at("f"));
    const double delta = cfg.params.at("delta");
    if (i > 0 || f > 0 || delta != 1.0)
      spec.positions = chains::nonuniform_positions(spec.n, i, f, delta);
  }
  return spec;
}

using Row = std::vector<double>;

struct RowProducer {
  std::vector<std::string> outputs;  // alphabetical
  std::function<Row(const ExperimentConfig&)> compute;
};

RowProducer producer_for(const ExperimentConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e == "scatter-two") {
    const bool closed = cfg.options.at("initial") == "A";
    RowProducer rp;
    rp.outputs = closed ? std::vector<std::string>{"closed_form", "concurrence", "eof_ebits", "log_negativity"}
                        : std::vector<std::string>{"concurrence", "eof_ebits", "log_negativity"};
    rp.compute = [closed](const ExperimentConfig& point) {
      scatter::ScatterConfig sc = scatter_config_from(point);
      auto result = scatter::run_protocol(sc);
      const double c = entmeas::concurrence(result.rho_n);
      const double eof = entmeas::eof_from_concurrence(std::min(c, 1.0));
      const double neg = entmeas::log_negativity(result.rho_n, 0);
      if (closed) return Row{scatter::concurrence_closed_form(sc), c, eof, neg};
      return Row{c, eof, neg};
    };
    return rp;
  }
  if (e == "scatter-many") {
    RowProducer rp;
    rp.outputs = {"c_pair"};
    rp.compute = [](const ExperimentConfig& point) {
      scatter::ScatterConfig sc = scatter_config_from(point);
      const int k = int(point.params.at("k"));
      const int m = int(point.params.at("m"));
      const int n = int(point.params.at("n"));
      const double c = sc.initial == scatter::Initial::A
                           ? multiscatter::pair_concurrence(sc, m, n)
                           : multiscatter::polarized_oracle(sc, k, m, n);
      return Row{c};
    };
    return rp;
  }
  if (e == "barrier") {
    RowProducer rp;
    rp.outputs = {"density", "sx", "sy", "sz"};
    rp.compute = [](const ExperimentConfig& point) {
      barrier::BarrierConfig bc;
      bc.big_l = point.params.at("big_l");
      bc.l = point.params.at("l");
      bc.b_z = point.params.at("b_z");
      bc.k0 = point.params.at("k0");
      bc.x0 = point.params.at("x0");
      bc.w = point.params.at("w");
      bc.n_modes = int(point.params.at("n_modes"));
      const double x_out = point.params.at("x_out");
      const double t = point.params.at("t");
      const auto sp = barrier::wavepacket(bc, x_out, t);
      const auto se = barrier::spin_expectations(bc, x_out, t);
      return Row{sp.density(), se.sx, se.sy, se.sz};
    };
    return rp;
  }
  if (e == "chain-transfer" || e == "ring-transfer") {
    RowProducer rp;
    rp.outputs = {"f_abs", "fidelity"};
    const bool ring = e == "ring-transfer";
    rp.compute = [ring](const ExperimentConfig& point) {
      chains::ChainSpec spec =
          chain_spec_from(point, ring ? chains::Geometry::Ring : chains::Geometry::Open);
      int s = int(point.params.at("s"));
      int r = int(point.params.at("r"));
      if (r <= 0) r = ring ? s + spec.n / 2 : spec.n;  // antipodal / far end
      const double t = point.params.at("t");
      int encoded_k = ring ? 1 : int(point.params.at("encoded_k"));
      auto tr = chains::fidelity_trace(spec, s, r, {t}, encoded_k);
      return Row{tr.f_abs[0], tr.fidelity[0]};
    };
    return rp;
  }
  if (e == "robustness") {
    RowProducer rp;
    rp.outputs = {"failure_rate"};
    rp.compute = [seed = cfg.seed](const ExperimentConfig& point) {
      const double rate =
          chains::robustness_mc(point.params.at("l"), point.params.at("p"),
                                int(point.params.at("iterations")), point.params.at("threshold"), seed);
      return Row{rate};
    };
    return rp;
  }
  throw ConfigError("unknown experiment: " + e);
}

}  // namespace

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw ConfigError("an experiment name is required");
  ExperimentConfig cfg;
  std::size_t i = 0;
  if (args[0].rfind("--", 0) != 0) {
    cfg.experiment = args[0];
    i = 1;
  }
  std::vector<std::pair<std::string, std::string>> pending;
  for (; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto next = [&]() -> const std::string& {
      if (i + 1 >= args.size()) throw ConfigError("missing value after " + a);
      return args[++i];
    };
    if (a == "--param") {
      const std::string& kv = next();
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--param expects key=value");
      pending.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    } else if (a == "--sweep") {
      cfg.sweep = parse_sweep(next());
    } else if (a == "--out") {
      cfg.output_dir = next();
    } else if (a == "--format") {
      cfg.formats.clear();
      std::stringstream ss(next());
      std::string f;
      while (std::getline(ss, f, ',')) cfg.formats.push_back(f);
    } else if (a == "--seed") {
      cfg.seed = std::stoull(next());
    } else if (a == "--config") {
      ExperimentConfig file_cfg = parse_config_file(next());
      if (cfg.experiment.empty()) cfg.experiment = file_cfg.experiment;
      for (const auto& [k, v] : file_cfg.params) cfg.params.insert({k, v});
      for (const auto& [k, v] : file_cfg.options) cfg.options.insert({k, v});
      if (!cfg.sweep) cfg.sweep = file_cfg.sweep;
      cfg.seed = file_cfg.seed ? file_cfg.seed : cfg.seed;
    } else {
      throw ConfigError("unknown flag: " + a);
    }
  }
  if (cfg.experiment.empty()) throw ConfigError("an experiment name is required");
  if (!schemas().count(cfg.experiment)) throw ConfigError("unknown experiment: " + cfg.experiment);
  for (const auto& [k, v] : pending) apply_key(cfg, k, v);
  finalize(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::vector<std::pair<std::string, std::string>> pending;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config lines must be key=value: " + line);
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    value.erase(value.begin(), std::find_if(value.begin(), value.end(), notspace));
    if (key == "experiment") cfg.experiment = value;
    else if (key == "sweep") cfg.sweep = parse_sweep(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "out") cfg.output_dir = value;
    else if (key == "format") {
      cfg.formats.clear();
      std::stringstream ss(value);
      std::string f;
      while (std::getline(ss, f, ',')) cfg.formats.push_back(f);
    } else {
      pending.emplace_back(key, value);
    }
  }
  if (cfg.experiment.empty()) throw ConfigError("config file does not name an experiment");
  for (const auto& [k, v] : pending) apply_key(cfg, k, v);
  finalize(cfg);
  return cfg;
}

ResultTable execute(const ExperimentConfig& cfg) {
  RowProducer rp = producer_for(cfg);
  ResultTable table;
  table.experiment = cfg.experiment;
  table.seed = cfg.seed;
  table.version = spinlab::version;
  for (const auto& [k, v] : cfg.params) table.meta[k] = fmt17(v);
  for (const auto& [k, v] : cfg.options) table.meta[k] = v;
  if (cfg.sweep) table.meta["sweep"] = cfg.sweep->name;

  if (cfg.sweep) {
    table.columns.push_back(cfg.sweep->name);
    for (const auto& o : rp.outputs) table.columns.push_back(o);
    table.rows.resize(cfg.sweep->steps);
    for (int i = 0; i < cfg.sweep->steps; ++i) {
      ExperimentConfig point = cfg;
      const double x = cfg.sweep->at(i);
      point.params[cfg.sweep->name] = x;
      Row row = rp.compute(point);
      row.insert(row.begin(), x);
      table.rows[i] = std::move(row);
    }
  } else {
    table.columns = rp.outputs;
    table.rows.push_back(rp.compute(cfg));
  }
  return table;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "# experiment=" << table.experiment << "\n";
  out << "# version=" << table.version << "\n";
  out << "# seed=" << table.seed << "\n";
  for (const auto& [k, v] : table.meta) out << "# " << k << "=" << v << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt17(row[c]);
    out << "\n";
  }
  return out.str();
}

ResultTable csv_from_string(const std::string& text) {
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      if (key == "experiment") table.experiment = value;
      else if (key == "version") table.version = value;
      else if (key == "seed") table.seed = std::stoull(value);
      else table.meta[key] = value;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      header_done = true;
      continue;
    }
    Row row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return csv_from_string(buffer.str());
}

std::string to_json(const ResultTable& table) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["experiment"] = table.experiment;
  j["version"] = table.version;
  j["seed"] = table.seed;
  j["params"] = table.meta;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j.dump(2) + "\n";
}

std::string to_svg(const ResultTable& table) {
  if (table.rows.empty() || table.columns.size() < 2)
    throw IoError("svg rendering needs a sweep with at least one output column");
  const int width = 800, height = 500, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& row : table.rows) {
    xmin = std::min(xmin, row[0]);
    xmax = std::max(xmax, row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      ymin = std::min(ymin, row[c]);
      ymax = std::max(ymax, row[c]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<metadata>experiment=" << table.experiment << " version=" << table.version
      << " seed=" << table.seed << "</metadata>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  char buf[128];
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[(c - 1) % 6] << "\" points=\"";
    for (const auto& row : table.rows) {
      std::snprintf(buf, sizeof buf, "%.6g,%.6g ", px(row[0]), py(row[c]));
      out << buf;
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin + 5 << "\" y=\"" << margin + 16 * c << "\" fill=\""
        << colors[(c - 1) % 6] << "\" font-size=\"12\">" << table.columns[c] << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - margin / 3
      << "\" text-anchor=\"middle\" font-size=\"14\">" << table.columns[0]
      << " (natural units)</text>\n";
  out << "<text x=\"" << margin / 3 << "\" y=\"" << height / 2 << "\" font-size=\"14\" "
      << "transform=\"rotate(-90 " << margin / 3 << " " << height / 2 << ")\" "
      << "text-anchor=\"middle\">" << table.experiment << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<std::string> render(const ResultTable& table, const std::vector<std::string>& formats,
                                const std::string& output_dir) {
  if (table.rows.empty()) throw IoError("render: refusing to write an empty table");
  std::filesystem::create_directories(output_dir);
  std::vector<std::string> written;
  for (const auto& f : formats) {
    std::string path = output_dir + "/" + table.experiment + "." + f;
    std::string payload;
    if (f == "csv") payload = to_csv(table);
    else if (f == "json") payload = to_json(table);
    else if (f == "svg") payload = to_svg(table);
    else throw IoError("render: unknown format " + f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("render: cannot write " + path);
    out << payload;
    written.push_back(path);
  }
  return written;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << "usage: spinlab <experiment> [--param k=v ...] [--sweep name:start:stop:steps]\n"
                 "               [--out dir] [--format csv,json,svg] [--seed n] [--config file]\n"
                 "experiments: scatter-two scatter-many barrier chain-transfer ring-transfer robustness\n";
    return args.empty() ? 1 : 0;
  }
  try {
    ExperimentConfig cfg = parse_config(args);
    const auto t0 = std::chrono::steady_clock::now();
    ResultTable table = execute(cfg);
    auto files = render(table, cfg.formats, cfg.output_dir);
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "wrote";
    for (const auto& f : files) std::cerr << " " << f;
    std::cerr << "  (" << table.rows.size() << " rows, " << dt << " s)\n";
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace spinlab::cli
