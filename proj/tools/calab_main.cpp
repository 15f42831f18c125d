// calab: simulate, render and estimate from the command line.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "calab/entropy.hpp"
#include "calab/error.hpp"
#include "calab/fe.hpp"
#include "calab/fe_analysis.hpp"
#include "calab/gilman.hpp"
#include "calab/orbits.hpp"
#include "calab/registry.hpp"

using namespace calab;
using nlohmann::json;

namespace {

struct Common {
  std::string automaton = "identity";
  std::string measure = "uniform:2";
  long samples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  long window_budget = SamplingOptions{}.window_budget;
  std::string out;  // JSON lines; stdout when empty
  std::string csv;

  SamplingOptions sampling() const { return {samples, seed, workers, window_budget}; }
  // Everything that determines the results; worker count and paths excluded.
  json to_json() const {
    return {{"automaton", automaton}, {"measure", measure}, {"samples", samples},
            {"seed", seed},           {"window_budget", window_budget}};
  }
};

void add_common(CLI::App* app, Common& c, bool with_measure = true) {
  app->add_option("--automaton,-a", c.automaton, "automaton id")->capture_default_str();
  if (with_measure) app->add_option("--measure,-m", c.measure, "measure id")->capture_default_str();
  app->add_option("--samples,-N", c.samples, "Monte Carlo samples")->capture_default_str();
  app->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app->add_option("--workers,-j", c.workers, "worker threads")->capture_default_str();
  app->add_option("--window-budget", c.window_budget, "largest window per sample, cells")->capture_default_str();
  app->add_option("--out,-o", c.out, "JSON lines output (stdout if omitted)");
  app->add_option("--csv", c.csv, "CSV projection of the estimate reports");
}

std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(part, &used));
      if (used != part.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("bad integer list '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

// Every record carries the config, its digest and the code version.
void emit(const Common& c, const json& config, const std::vector<json>& records,
          const std::vector<EstimateReport>& reports = {}) {
  const std::string digest = config_digest(config);
  std::ostringstream os;
  for (json r : records) {
    r["config"] = config;
    r["config_digest"] = digest;
    r["code_version"] = kCodeVersion;
    os << r.dump() << '\n';
  }
  if (c.out.empty()) std::cout << os.str();
  else open_out(c.out) << os.str();
  if (!c.csv.empty()) {
    auto f = open_out(c.csv);
    f << "# config_digest=" << digest << " code_version=" << kCodeVersion << '\n';
    f << EstimateReport::csv_header() << '\n';
    for (const auto& r : reports) f << r.csv_row() << '\n';
  }
}

WindowSampler make_sampler(const CompositeAutomaton& f, const MeasureSpec& mu, std::uint64_t seed,
                           long burn_in) {
  return burn_in > 0 ? evolved_sampler(f, mu, seed, burn_in) : measure_sampler(mu, seed);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void require_fe(const CompositeAutomaton& f, const std::string& init) {
  if (!(*f.alphabet() == *fe::alphabet()))
    throw ConfigError("initial condition '" + init + "' needs an automaton over the F_e alphabet");
}

CyclicConfiguration initial_configuration(const CompositeAutomaton& f, const std::string& init,
                                          long width, const std::string& measure, std::uint64_t seed) {
  auto colon = init.find(':');
  const std::string kind = init.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : init.substr(colon + 1);
  if (kind == "zero" || kind == "random") {
    if (width < 1) throw ConfigError("width must be positive");
    if (kind == "zero") return CyclicConfiguration(f.alphabet(), Word(static_cast<std::size_t>(width), 0));
    MeasureSpec mu = make_measure(measure);
    if (!(*mu.alphabet == *f.alphabet())) throw ConfigError("measure and automaton alphabets differ");
    return CyclicConfiguration(f.alphabet(), sample_window(mu, {0, width - 1}, CellStream(seed, 0)).cells());
  }
  if (kind == "word") return CyclicConfiguration(f.alphabet(), parse_word(*f.alphabet(), arg));
  require_fe(f, init);
  if (kind == "counter") {
    long l = parse_list(arg).at(0);
    long tail = std::max<long>(400, static_cast<long>(fe::reach_bound(l)) + 60);
    return fe::counter_chain({fe::ChainCounter{l, false, fe::E1, 1, fe::R}}, fe::E1, tail).config;
  }
  if (kind == "void") {
    long k = parse_list(arg).at(0);
    return fe::counter_chain({fe::ChainCounter{k, true, fe::E0, 1, fe::R}}, fe::E1, 400).config;
  }
  if (kind == "chain") {
    int void_index = -1;
    std::string sizes = arg;
    if (auto v = arg.find(":void="); v != std::string::npos) {
      sizes = arg.substr(0, v);
      void_index = static_cast<int>(parse_list(arg.substr(v + 6)).at(0));
    }
    return fe::analyzer_chain(parse_list(sizes), void_index).config;
  }
  throw ConfigError("unknown initial condition '" + init + "'");
}

int cmd_simulate(const Common& c, const std::string& init, long width, long steps, const std::string& dir) {
  if (steps < 0) throw ConfigError("negative step count");
  if (dir.empty()) throw ConfigError("--out-dir is required");
  const auto f = make_automaton(c.automaton);
  CyclicConfiguration x = initial_configuration(f, init, width, c.measure, c.seed);
  const Alphabet& A = *f.alphabet();
  json config{{"command", "simulate"}, {"automaton", c.automaton}, {"measure", c.measure},
              {"seed", c.seed},        {"init", init},             {"width", x.length()},
              {"steps", steps},        {"provenance", f.provenance()}};
  const std::string digest = config_digest(config);
  std::vector<std::string> factors;
  for (std::size_t k = 0; k < A.factor_count(); ++k) factors.push_back(A.factor_symbols(k));
  json header{{"config", config}, {"config_digest", digest}, {"code_version", kCodeVersion},
              {"factors", factors}, {"width", x.length()}, {"rows", steps + 1}};
  std::ostringstream os;
  os << "# " << header.dump() << '\n';
  for (long t = 0; t <= steps; ++t) {
    if (t) x = step(f, x);
    const Word row = x.read(0, x.length() - 1);
    for (std::size_t k = 0; k < A.factor_count(); ++k) os << (k ? " " : "") << A.render(row, k);
    os << '\n';
  }
  std::filesystem::create_directories(dir);
  const std::string body = os.str();
  open_out(dir + "/spacetime.txt") << body;
  json manifest = header;
  manifest["files"] = {{"spacetime.txt", hex(fnv1a(body))}};
  open_out(dir + "/manifest.json") << manifest.dump(2) << '\n';
  std::cout << manifest.dump() << '\n';
  return 0;
}

// 0 white, then saturated colours; binary layers use 1 = black.
const unsigned char kPalette[10][3] = {{255, 255, 255}, {220, 30, 30},  {30, 60, 220}, {0, 0, 0},
                                       {110, 110, 110}, {30, 160, 60},  {240, 150, 20}, {150, 60, 180},
                                       {20, 170, 180},  {200, 200, 40}};

int cmd_render(const std::string& input, int component, long decimate, const std::string& out) {
  if (decimate < 1) throw ConfigError("decimation must be at least 1");
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot read " + input);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ConfigError(input + " is not a space-time file");
  json header = json::parse(line.substr(2));
  auto factors = header.at("factors").get<std::vector<std::string>>();
  if (component < 0 || component >= static_cast<int>(factors.size()))
    throw ConfigError("unknown component " + std::to_string(component) + " (file has " +
                      std::to_string(factors.size()) + ")");
  const std::string& symbols = factors[static_cast<std::size_t>(component)];
  std::vector<std::string> rows;
  for (long t = 0; std::getline(in, line); ++t) {
    if (t % decimate) continue;
    std::istringstream ls(line);
    std::string tok;
    for (int k = 0; k <= component; ++k) ls >> tok;
    rows.push_back(tok);
  }
  if (rows.empty()) throw ConfigError(input + " has no rows");
  const std::size_t w = rows.front().size();
  const bool gray = symbols.size() == 2;
  std::ostringstream os;
  os << (gray ? "P5" : "P6") << "\n# calab config_digest=" << header.value("config_digest", "")
     << " code_version=" << kCodeVersion << " component=" << component << " decimate=" << decimate
     << "\n" << w << ' ' << rows.size() << "\n255\n";
  for (const auto& r : rows) {
    if (r.size() != w) throw ConfigError("ragged space-time file");
    for (char ch : r) {
      auto v = symbols.find(ch);
      if (v == std::string::npos) throw ConfigError(std::string("unexpected symbol '") + ch + "'");
      if (gray) {
        os.put(static_cast<char>(v ? 0 : 255));
      } else {
        for (int k = 0; k < 3; ++k) os.put(static_cast<char>(kPalette[v % 10][k]));
      }
    }
  }
  open_out(out) << os.str();
  return 0;
}

json command_config(const Common& c, const std::string& command, const CompositeAutomaton& f) {
  json j = c.to_json();
  j["command"] = command;
  j["provenance"] = f.provenance();
  return j;
}

MeasureSpec measure_for(const Common& c, const CompositeAutomaton& f) {
  MeasureSpec mu = make_measure(c.measure);
  if (!(*mu.alphabet == *f.alphabet())) throw ConfigError("measure and automaton alphabets differ");
  return mu;
}

int cmd_classify(const Common& c, const std::string& anchor_spec, long n, const std::string& horizons_text,
                 bool conditioned) {
  const auto f = make_automaton(c.automaton);
  const MeasureSpec mu = measure_for(c, f);
  const std::vector<long> horizons = parse_list(horizons_text);
  if (n < 0) throw ConfigError("n must be non-negative");
  const long tmax = *std::max_element(horizons.begin(), horizons.end());
  const Interval cone = light_cone(f, {-n, n}, tmax - 1);
  if (cone.size() > c.window_budget) throw BudgetError("anchor window exceeds the budget");
  std::vector<WindowConfiguration> anchors;
  if (anchor_spec == "zero") {
    anchors.emplace_back(f.alphabet(), Word(static_cast<std::size_t>(cone.size()), 0), cone.lo);
  } else if (anchor_spec.rfind("sample:", 0) == 0) {
    long k = parse_list(anchor_spec.substr(7)).at(0);
    for (long a = 0; a < k; ++a)
      anchors.push_back(sample_window(mu, cone, CellStream(c.seed ^ 0xa5c0a5c0ULL, static_cast<std::uint64_t>(a))));
  } else if (anchor_spec.rfind("word:", 0) == 0) {
    CyclicConfiguration p(f.alphabet(), parse_word(*f.alphabet(), anchor_spec.substr(5)));
    anchors.push_back(WindowConfiguration::from_cyclic(p, cone.lo, cone.hi));
  } else {
    throw ConfigError("anchor must be zero, sample:<k> or word:<text>");
  }
  Classification v = classify(f, mu, anchors, n, horizons, c.sampling(), {conditioned});
  json config = command_config(c, "classify", f);
  config["anchors"] = anchor_spec;
  config["n"] = n;
  config["horizons"] = horizons;
  config["conditioned"] = conditioned;
  emit(c, config, {v.to_json()});
  return 0;
}

int cmd_cesaro(const Common& c, const std::vector<std::string>& cylinders, long n) {
  const auto f = make_automaton(c.automaton);
  const MeasureSpec mu = measure_for(c, f);
  if (cylinders.empty()) throw ConfigError("give at least one --cylinder");
  std::vector<Cylinder> panel;
  for (const auto& t : cylinders) panel.push_back(parse_cylinder(*f.alphabet(), t));
  auto res = cesaro_panel(f, mu, panel, n, c.sampling());
  json config = command_config(c, "cesaro", f);
  config["cylinders"] = cylinders;
  config["horizon"] = n;
  std::vector<json> records;
  std::vector<EstimateReport> reports;
  for (std::size_t k = 0; k < res.size(); ++k) {
    json r = res[k].estimate.to_json();
    r["cylinder"] = cylinders[k];
    r["exact_initial"] = cylinder_probability(mu, panel[k]);
    r["partial_means"] = res[k].partial_means;
    r["partial_stderr"] = res[k].partial_stderr;
    records.push_back(r);
    reports.push_back(res[k].estimate);
  }
  emit(c, config, records, reports);
  return 0;
}

int cmd_mixing(const Common& c, const std::string& c1, const std::string& c2,
               const std::string& separations, long n) {
  const auto f = make_automaton(c.automaton);
  const MeasureSpec mu = measure_for(c, f);
  auto res = mixing_gap(f, mu, parse_cylinder(*f.alphabet(), c1), parse_cylinder(*f.alphabet(), c2),
                        parse_list(separations), n, c.sampling());
  json config = command_config(c, "mixing", f);
  config["c1"] = c1;
  config["c2"] = c2;
  config["separations"] = parse_list(separations);
  config["horizon"] = n;
  std::vector<json> records;
  for (const auto& r : res) records.push_back(r.to_json());
  emit(c, config, records, res);
  return 0;
}

struct PeriodicArgs {
  long length = 4;
  int layer = -1;
  long burn_in = 0;
  std::string periods = "256,512,1024";
  long max_steps = 20000;
  long factor_samples = 64;
  double floor = 1e-3;
  long max_factors = 200;
  long seam_attempts = 8;
};

int cmd_periodic(const Common& c, const PeriodicArgs& a) {
  const auto f = make_automaton(c.automaton);
  const MeasureSpec mu = measure_for(c, f);
  DensityOptions d;
  d.periods = parse_list(a.periods);
  d.samples = a.factor_samples;
  d.frequency_floor = a.floor;
  d.max_factors = a.max_factors;
  d.layer = a.layer;
  d.seam_attempts = a.seam_attempts;
  d.max_steps = a.max_steps;
  d.seed = c.seed;
  d.workers = c.workers;
  DensityReport rep = periodic_density_probe(f, make_sampler(f, mu, c.seed, a.burn_in), a.length, d);
  json config = command_config(c, "periodic", f);
  config.erase("samples");
  config.update({{"length", a.length}, {"layer", a.layer}, {"burn_in", a.burn_in}, {"periods", d.periods},
                 {"max_steps", a.max_steps}, {"factor_samples", a.factor_samples}, {"floor", a.floor},
                 {"max_factors", a.max_factors}, {"seam_attempts", a.seam_attempts}});
  emit(c, config, {rep.to_json()});
  return rep.factors > 0 && rep.timeouts == rep.factors ? 3 : 0;
}

int cmd_entropy(const Common& c, const EntropyOptions& eo) {
  const auto f = make_automaton(c.automaton);
  const MeasureSpec mu = measure_for(c, f);
  EntropyEstimate e = estimate_column_entropy(f, mu, eo, c.sampling());
  json config = command_config(c, "entropy", f);
  config.update({{"p", eo.p}, {"k_max", eo.k_max}, {"burn_in", eo.burn_in}});
  emit(c, config, {e.to_json()});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calab: one-dimensional cellular automata laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kCodeVersion));
  Common c;

  auto* sim = app.add_subcommand("simulate", "run an automaton on a periodic configuration");
  std::string init = "zero", dir;
  long width = 512, steps = 100;
  add_common(sim, c);
  sim->add_option("--init", init, "zero | random | word:<w> | counter:<l> | void:<k> | chain:<l,..>[:void=<i>]")
      ->capture_default_str();
  sim->add_option("--width", width, "period length for zero and random")->capture_default_str();
  sim->add_option("--steps", steps, "time steps")->capture_default_str();
  sim->add_option("--out-dir", dir, "output directory")->required();

  auto* ren = app.add_subcommand("render", "space-time file to PGM/PPM");
  std::string input, image;
  int component = 0;
  long decimate = 1;
  ren->add_option("--input", input, "spacetime.txt from simulate")->required();
  ren->add_option("--component", component, "alphabet factor to draw")->capture_default_str();
  ren->add_option("--decimate", decimate, "keep one row in this many")->capture_default_str();
  ren->add_option("--out,-o", image, "image path")->required();

  auto* cls = app.add_subcommand("classify", "B_n(x) estimates and the equicontinuity verdict");
  std::string anchors = "zero", horizons = "16,32,64";
  long n = 1;
  bool conditioned = false;
  add_common(cls, c);
  cls->add_option("--anchor", anchors, "zero | sample:<k> | word:<w>")->capture_default_str();
  cls->add_option("--n", n, "trace half-width")->capture_default_str();
  cls->add_option("--horizons", horizons, "increasing list of T")->capture_default_str();
  cls->add_flag("--conditioned", conditioned, "sample y given C_n(x)");

  auto* ces = app.add_subcommand("cesaro", "Cesaro means of image cylinder measures");
  std::vector<std::string> cylinders;
  long horizon = 256;
  add_common(ces, c);
  ces->add_option("--cylinder", cylinders, "<word>@<position>, repeatable")->required();
  ces->add_option("--horizon", horizon, "n")->capture_default_str();

  auto* mix = app.add_subcommand("mixing", "shift mixing gap under the Cesaro mean");
  std::string c1, c2, seps = "400,800,1600";
  add_common(mix, c);
  mix->add_option("--c1", c1, "<word>@<position>")->required();
  mix->add_option("--c2", c2, "<word>@<position>")->required();
  mix->add_option("--separations", seps, "list of t")->capture_default_str();
  mix->add_option("--horizon", horizon, "n")->capture_default_str();

  auto* per = app.add_subcommand("periodic", "periodic-point density probe");
  PeriodicArgs pa;
  add_common(per, c);
  per->add_option("--length", pa.length, "factor length L")->capture_default_str();
  per->add_option("--layer", pa.layer, "alphabet factor, -1 for whole letters")->capture_default_str();
  per->add_option("--burn-in", pa.burn_in, "steps applied to the samples first")->capture_default_str();
  per->add_option("--periods", pa.periods, "wrap lengths")->capture_default_str();
  per->add_option("--max-steps", pa.max_steps, "orbit budget per candidate")->capture_default_str();
  per->add_option("--factor-samples", pa.factor_samples, "configurations to read factors from")->capture_default_str();
  per->add_option("--floor", pa.floor, "frequency floor")->capture_default_str();
  per->add_option("--max-factors", pa.max_factors, "most frequent factors kept")->capture_default_str();
  per->add_option("--seam-attempts", pa.seam_attempts, "random seam fillings")->capture_default_str();

  auto* ent = app.add_subcommand("entropy", "block entropy of the column factor");
  EntropyOptions eo;
  add_common(ent, c);
  ent->add_option("--p", eo.p, "half-width")->capture_default_str();
  ent->add_option("--kmax", eo.k_max, "longest block")->capture_default_str();
  ent->add_option("--burn-in", eo.burn_in, "first row of the blocks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(c, init, width, steps, dir);
    if (*ren) return cmd_render(input, component, decimate, image);
    if (*cls) return cmd_classify(c, anchors, n, horizons, conditioned);
    if (*ces) return cmd_cesaro(c, cylinders, horizon);
    if (*mix) return cmd_mixing(c, c1, c2, seps, horizon);
    if (*per) return cmd_periodic(c, pa);
    if (*ent) return cmd_entropy(c, eo);
  } catch (const ConfigError& e) {
    std::cerr << "calab: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "calab: budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "calab: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
