// Command-line front end. Talks to the library only through artin/artin.h.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "artin/artin.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kIntegrity = 3, kResource = 4 };

struct ApiError {
  artin_status status;
  std::string message;
};

void check(artin_status s) {
  if (s != ARTIN_OK) throw ApiError{s, artin_last_error()};
}

int exit_code(artin_status s) {
  switch (s) {
    case ARTIN_E_INVALID_ARGUMENT:
    case ARTIN_E_NOT_SQUAREFREE:
    case ARTIN_E_MODE: return kUsage;
    case ARTIN_E_INTEGRITY: return kIntegrity;
    case ARTIN_E_RESOURCE:
    case ARTIN_E_IO: return kResource;
    default: return kFailed;
  }
}

struct Usage {
  std::string message;
};

struct SieveDeleter {
  void operator()(artin_sieve* s) const { artin_sieve_free(s); }
};
struct ContextDeleter {
  void operator()(artin_context* c) const { artin_context_free(c); }
};
struct ScanDeleter {
  void operator()(artin_scan* s) const { artin_scan_free(s); }
};
using SievePtr = std::unique_ptr<artin_sieve, SieveDeleter>;
using ContextPtr = std::unique_ptr<artin_context, ContextDeleter>;
using ScanPtr = std::unique_ptr<artin_scan, ScanDeleter>;

std::string take(char* s) {
  std::string out(s);
  artin_string_free(s);
  return out;
}

struct Globals {
  std::string sieve_cache;
  unsigned threads = 1;
  std::string format = "csv";
  std::string out;
  std::string config;
};

std::optional<fs::path> cache_path(const Globals& g) {
  if (!g.sieve_cache.empty()) return fs::path(g.sieve_cache);
  if (const char* dir = std::getenv("ARTIN_CACHE_DIR"); dir && *dir) return fs::path(dir) / "sieve.afs";
  return std::nullopt;
}

// Loads the cache when it covers `limit`, otherwise builds (and refreshes the
// cache when one is configured).
SievePtr acquire_sieve(const Globals& g, std::uint64_t limit) {
  artin_sieve* raw = nullptr;
  const auto path = cache_path(g);
  if (path && fs::exists(*path)) {
    check(artin_sieve_load(path->c_str(), &raw));
    SievePtr loaded(raw);
    if (artin_sieve_limit(loaded.get()) >= limit) return loaded;
  }
  check(artin_sieve_build(limit, g.threads, &raw));
  SievePtr built(raw);
  if (path) {
    if (path->has_parent_path()) fs::create_directories(path->parent_path());
    check(artin_sieve_save(built.get(), path->c_str()));
  }
  return built;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ApiError{ARTIN_E_IO, "cannot write " + g.out};
  f << text;
}

std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// Context selection shared by scan and classify.
struct ContextArgs {
  std::uint32_t cyclotomic = 0;
  std::string poly;
  std::string spec;

  void add(CLI::App* cmd) {
    auto* c = cmd->add_option("--cyclotomic", cyclotomic, "Cyclotomic field Q(zeta_K)");
    auto* p = cmd->add_option("--poly", poly, "Monic polynomial, coefficients lowest degree first");
    auto* s = cmd->add_option("--context", spec, "Context specifier (cyclotomic:K or poly:...)");
    c->excludes(p)->excludes(s);
    p->excludes(s);
  }

  ContextPtr open() const {
    std::string text = spec;
    if (cyclotomic) text = "cyclotomic:" + std::to_string(cyclotomic);
    if (!poly.empty()) text = "poly:" + poly;
    if (text.empty()) throw Usage{"a context is required (--cyclotomic K or --poly c0,...,1)"};
    artin_context* raw = nullptr;
    check(artin_context_parse(text.c_str(), &raw));
    return ContextPtr(raw);
  }
};

std::vector<std::string> class_labels(const artin_context* ctx) {
  std::vector<std::string> out;
  for (size_t i = 0; i < artin_context_class_count(ctx); ++i) out.emplace_back(artin_context_class_label(ctx, i));
  return out;
}

// Maps requested labels to canonical ones; "all" or nothing selects every class.
std::vector<std::string> resolve_labels(const artin_context* ctx, const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& r : requested) {
    if (r == "all") return {};
    size_t idx = 0;
    if (artin_context_class_index(ctx, r.c_str(), &idx) != ARTIN_OK) throw Usage{"unknown class label '" + r + "'"};
    out.emplace_back(artin_context_class_label(ctx, idx));
  }
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    try {
      out.push_back(std::stoull(item, &pos));
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item[0] == '-') throw Usage{"bad integer list entry '" + item + "'"};
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    try {
      out.push_back(std::stod(item, &pos));
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw Usage{"bad number list entry '" + item + "'"};
  }
  return out;
}

// "lo:hi:step" inclusive of hi up to rounding.
std::vector<double> parse_grid(const std::string& text) {
  const auto parts = parse_double_list([&] {
    std::string t = text;
    std::replace(t.begin(), t.end(), ':', ',');
    return t;
  }());
  if (parts.size() != 3 || parts[2] <= 0 || parts[1] < parts[0]) throw Usage{"grid must be lo:hi:step"};
  std::vector<double> out;
  const auto steps = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= steps; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

// Reads "key = value" lines; blank lines and '#' comments are skipped.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage{"cannot read config " + path};
  std::vector<std::pair<std::string, std::string>> out;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Usage{"config line without '=': " + line};
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

// Config values become ordinary flags placed right after the subcommand, so
// anything given on the command line still wins.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const CLI::App& app) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty()) return args;

  std::size_t insert_at = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    bool is_sub = false;
    for (const auto* sub : app.get_subcommands({})) is_sub = is_sub || sub->check_name(args[i]);
    if (is_sub) {
      insert_at = i + 1;
      break;
    }
  }
  auto given = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(config)) {
    if (key == "config" || given(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(insert_at));
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(insert_at), args.end());
  return out;
}

// ---- commands ----

struct SieveBuildCmd {
  std::uint64_t limit = 10'000'000;

  int run(const Globals& g) const {
    const auto path = cache_path(g);
    if (!path) throw Usage{"sieve-build needs --sieve-cache or ARTIN_CACHE_DIR"};
    artin_sieve* raw = nullptr;
    check(artin_sieve_build(limit, g.threads, &raw));
    SievePtr sieve(raw);
    if (path->has_parent_path()) fs::create_directories(path->parent_path());
    check(artin_sieve_save(sieve.get(), path->c_str()));
    std::uint64_t primes = 0;
    check(artin_prime_count(sieve.get(), limit, &primes));
    if (g.format == "json")
      emit(g, json{{"path", path->string()}, {"limit", limit}, {"primes", primes}}.dump(2) + "\n");
    else
      emit(g, "path,limit,primes\n" + path->string() + "," + std::to_string(limit) + "," + std::to_string(primes) + "\n");
    return kOk;
  }
};

struct ScanCmd {
  ContextArgs context;
  std::vector<std::string> classes;
  std::uint64_t x_max = 0;
  std::string checkpoints;
  std::string mode = "compensated";
  std::uint64_t range_size = 65536;
  std::string state;
  bool resume = false;
  std::uint64_t stop_after = 0;
  bool aux = false;

  int run(const Globals& g) const {
    const ContextPtr ctx = context.open();
    const auto labels = resolve_labels(ctx.get(), classes);
    const auto cps = parse_u64_list(checkpoints);
    if (resume && state.empty()) throw Usage{"--resume needs --state"};
    const SievePtr sieve = acquire_sieve(g, std::max<std::uint64_t>(x_max, 2));

    artin_scan_options opt;
    artin_scan_options_init(&opt);
    opt.x_max = x_max;
    opt.checkpoints = cps.data();
    opt.checkpoint_count = cps.size();
    opt.exact = mode == "exact";
    opt.threads = g.threads;
    opt.range_size = range_size;
    opt.state_path = state.empty() ? nullptr : state.c_str();
    opt.resume = resume;
    opt.stop_after_ranges = stop_after;
    artin_scan* raw = nullptr;
    check(artin_scan_run(ctx.get(), sieve.get(), &opt, &raw));
    const ScanPtr scan(raw);
    if (!artin_scan_complete(scan.get()))
      std::cerr << "scan stopped early; continue with --resume --state " << state << "\n";
    else
      check(artin_scan_audit(scan.get(), 1e-12, nullptr));

    std::vector<const char*> ptrs;
    for (const auto& l : labels) ptrs.push_back(l.c_str());
    char* text = nullptr;
    check(artin_scan_report(scan.get(), g.format.c_str(), ptrs.empty() ? nullptr : ptrs.data(), ptrs.size(), aux,
                            &text));
    emit(g, take(text));
    return kOk;
  }
};

struct TableCmd {
  int decimals = 3;
  bool strict = false;

  int run(const Globals& g) const {
    const SievePtr sieve = acquire_sieve(g, 80'000);
    char* text = nullptr;
    int within = 0;
    check(artin_reproduce_table(sieve.get(), g.threads, decimals, g.format.c_str(), &text, &within));
    emit(g, take(text));
    if (!within) {
      std::cerr << "warning: some cells fall outside the +/-0.005 reference window\n";
      if (strict) return kFailed;
    }
    return kOk;
  }
};

struct VerifyCmd {
  std::uint64_t nmax = 5000;
  unsigned kmax = 3;
  std::uint64_t seed = 1;
  unsigned weights = 5;
  std::uint64_t fault = 0;

  int run(const Globals& g) const {
    const SievePtr sieve = acquire_sieve(g, std::max<std::uint64_t>(nmax, 2));
    artin_verify_options opt;
    artin_verify_options_init(&opt);
    opt.nmax = nmax;
    opt.kmax = kmax;
    opt.seed = seed;
    opt.weights = weights;
    opt.threads = g.threads;
    opt.flip_mu_at = fault;
    char* text = nullptr;
    int passed = 0;
    check(artin_verify(sieve.get(), &opt, &text, &passed));
    const std::string summary = take(text);
    if (g.format == "json") {
      emit(g, summary);
    } else {
      const json doc = json::parse(summary);
      std::string out = "check,cases,failures,pass\n";
      for (const auto& c : doc["checks"])
        out += c["name"].get<std::string>() + "," + std::to_string(c["cases"].get<std::uint64_t>()) + "," +
               std::to_string(c["failures"].get<std::uint64_t>()) + "," + (c["pass"].get<bool>() ? "yes" : "no") +
               "\n";
      emit(g, out);
      if (!doc["counterexample"].is_null()) std::cerr << "counterexample: " << doc["counterexample"].dump() << "\n";
    }
    return passed ? kOk : kFailed;
  }
};

struct DickmanCmd {
  std::string alphas;
  std::string grid;

  int run(const Globals& g) const {
    if (alphas.empty() == grid.empty()) throw Usage{"give exactly one of --alpha or --grid"};
    const auto points = alphas.empty() ? parse_grid(grid) : parse_double_list(alphas);
    json rows = json::array();
    std::string csv = "alpha,rho\n";
    for (double a : points) {
      double rho = 0.0;
      check(artin_dickman_rho(a, &rho));
      rows.push_back({{"alpha", a}, {"rho", rho}});
      csv += fmt_double(a) + "," + fmt_double(rho) + "\n";
    }
    emit(g, g.format == "json" ? rows.dump(2) + "\n" : csv);
    return kOk;
  }
};

struct SmoothCmd {
  std::uint64_t x = 0;
  std::string ys;
  std::string alphas;

  int run(const Globals& g) const {
    if (ys.empty() == alphas.empty()) throw Usage{"give exactly one of --y or --alpha"};
    if (x < 2) throw Usage{"--x must be at least 2"};
    const SievePtr sieve = acquire_sieve(g, x);
    std::vector<std::uint64_t> profile(x + 1);
    check(artin_psi_profile(sieve.get(), x, profile.data(), profile.size()));
    const double lx = std::log(static_cast<double>(x));

    std::vector<std::pair<std::uint64_t, double>> points;  // (y, alpha)
    if (!ys.empty()) {
      for (auto y : parse_u64_list(ys)) {
        if (y < 2 || y > x) throw Usage{"y must lie in [2, x]"};
        points.emplace_back(y, lx / std::log(static_cast<double>(y)));
      }
    } else {
      for (double a : parse_double_list(alphas)) {
        if (!(a >= 1.0)) throw Usage{"alpha must be at least 1"};
        const auto y = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(x), 1.0 / a) + 1e-9));
        if (y < 2) throw Usage{"x^(1/alpha) falls below 2"};
        points.emplace_back(y, a);
      }
    }
    json rows = json::array();
    std::string csv = "x,y,alpha,psi,envelope\n";
    for (const auto& [y, a] : points) {
      const std::uint64_t psi = profile[y];
      const double envelope = static_cast<double>(psi) * std::exp(a / 2) / static_cast<double>(x);
      rows.push_back({{"x", x}, {"y", y}, {"alpha", a}, {"psi", psi}, {"envelope", envelope}});
      csv += std::to_string(x) + "," + std::to_string(y) + "," + fmt_double(a) + "," + std::to_string(psi) + "," +
             fmt_double(envelope) + "\n";
    }
    emit(g, g.format == "json" ? rows.dump(2) + "\n" : csv);
    return kOk;
  }
};

struct ClassifyCmd {
  ContextArgs context;
  std::string primes;
  std::uint64_t up_to = 0;

  int run(const Globals& g) const {
    const ContextPtr ctx = context.open();
    const auto labels = class_labels(ctx.get());
    if (primes.empty() && up_to == 0) {
      json classes = json::array();
      std::string csv = "class,size,density\n";
      for (size_t i = 0; i < labels.size(); ++i) {
        char* d = nullptr;
        check(artin_class_density(ctx.get(), labels[i].c_str(), &d));
        const std::string density = take(d);
        const auto size = artin_context_class_size(ctx.get(), i);
        classes.push_back({{"class", labels[i]}, {"size", size}, {"density", density}});
        csv += labels[i] + "," + std::to_string(size) + "," + density + "\n";
      }
      std::vector<std::uint32_t> ramified;
      for (size_t i = 0; i < artin_context_ramified_count(ctx.get()); ++i)
        ramified.push_back(artin_context_ramified(ctx.get(), i));
      if (g.format == "json") {
        emit(g, json{{"group_order", artin_context_group_order(ctx.get())},
                     {"classes", classes},
                     {"ramified", ramified}}
                        .dump(2) +
                    "\n");
      } else {
        for (auto p : ramified) csv += "ramified:" + std::to_string(p) + ",,\n";
        emit(g, csv);
      }
      return kOk;
    }

    std::vector<std::uint64_t> ps = parse_u64_list(primes);
    SievePtr sieve;
    if (up_to) {
      sieve = acquire_sieve(g, std::max<std::uint64_t>(up_to, 2));
      for (std::uint64_t n = 2; n <= up_to; ++n) {
        int mu = 0;
        unsigned w = 0, big = 0;
        check(artin_sieve_arith(sieve.get(), n, &mu, &w, &big));
        if (big == 1) ps.push_back(n);
      }
    }
    json rows = json::array();
    std::string csv = "p,class\n";
    for (auto p : ps) {
      int ramified = 0;
      size_t idx = 0;
      check(artin_classify(ctx.get(), p, &ramified, &idx));
      const std::string label = ramified ? "ramified" : labels[idx];
      rows.push_back({{"p", p}, {"class", label}});
      csv += std::to_string(p) + "," + (label.find(',') != std::string::npos ? "\"" + label + "\"" : label) + "\n";
    }
    emit(g, g.format == "json" ? rows.dump(2) + "\n" : csv);
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-restricted Moebius sums, duality identities and smooth-number counts", "artin"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(artin_version()));

  Globals g;
  app.add_option("--sieve-cache", g.sieve_cache, "Sieve cache file (default $ARTIN_CACHE_DIR/sieve.afs)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--config", g.config, "key = value file supplying default flags");

  SieveBuildCmd sieve_build;
  auto* c_sieve = app.add_subcommand("sieve-build", "Build a sieve and write the cache file");
  c_sieve->add_option("--limit", sieve_build.limit, "Sieve limit")->check(CLI::Range(2ull, 0xFFFFFFFFull));

  ScanCmd scan;
  auto* c_scan = app.add_subcommand("scan", "Accumulate every tracked sum up to --xmax");
  scan.context.add(c_scan);
  c_scan->add_option("--class", scan.classes, "Class label to report, repeatable, or 'all'");
  c_scan->add_option("--xmax", scan.x_max, "Upper bound of the scan")->required();
  c_scan->add_option("--checkpoints", scan.checkpoints, "Comma-separated checkpoints (default: xmax)");
  c_scan->add_option("--mode", scan.mode, "Accumulation mode")->check(CLI::IsMember({"exact", "compensated"}));
  c_scan->add_option("--range-size", scan.range_size, "Range length for parallel work")->check(CLI::PositiveNumber);
  c_scan->add_option("--state", scan.state, "State file written after every batch of ranges");
  c_scan->add_flag("--resume", scan.resume, "Continue from --state");
  c_scan->add_option("--stop-after", scan.stop_after, "Stop after this many ranges");
  c_scan->add_flag("--aux", scan.aux, "Also report ramified slices and the total");

  TableCmd table;
  auto* c_table = app.add_subcommand("reproduce-table", "Three-class table for x^3 + x + 1 at 20000/40000/80000");
  c_table->add_option("--decimals", table.decimals, "Rounding of the value column")->check(CLI::Range(0, 15));
  c_table->add_flag("--strict", table.strict, "Exit 1 when a cell leaves the reference window");

  VerifyCmd verify;
  auto* c_verify = app.add_subcommand("verify", "Exact identity, splitting and partition checks");
  c_verify->alias("duality-test");
  c_verify->add_option("--nmax", verify.nmax, "Largest n checked")->check(CLI::Range(2ull, 1'000'000ull));
  c_verify->add_option("--kmax", verify.kmax, "Largest k checked")->check(CLI::Range(1u, 16u));
  c_verify->add_option("--seed", verify.seed, "Seed of the first random weight");
  c_verify->add_option("--weights", verify.weights, "Number of random weights")->check(CLI::Range(1u, 64u));
  c_verify->add_option("--inject-mu-fault", verify.fault)->group("");

  DickmanCmd dickman;
  auto* c_dickman = app.add_subcommand("dickman", "Tabulate Dickman's rho");
  c_dickman->add_option("--alpha", dickman.alphas, "Comma-separated alpha values");
  c_dickman->add_option("--grid", dickman.grid, "lo:hi:step");

  SmoothCmd smooth;
  auto* c_smooth = app.add_subcommand("smooth", "Tabulate Psi(x, y) and Psi(x, y) e^(alpha/2) / x");
  c_smooth->add_option("--x", smooth.x, "x")->required();
  c_smooth->add_option("--y", smooth.ys, "Comma-separated y values");
  c_smooth->add_option("--alpha", smooth.alphas, "Comma-separated alpha values, y = floor(x^(1/alpha))");

  ClassifyCmd classify;
  auto* c_classify = app.add_subcommand("classify", "Class table of a context, or Frobenius classes of primes");
  classify.context.add(c_classify);
  c_classify->add_option("--prime", classify.primes, "Comma-separated primes");
  c_classify->add_option("--up-to", classify.up_to, "Every prime up to this bound");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const Usage& u) {
    std::cerr << "error: " << u.message << "\n";
    return kUsage;
  }

  try {
    if (c_sieve->parsed()) return sieve_build.run(g);
    if (c_scan->parsed()) return scan.run(g);
    if (c_table->parsed()) return table.run(g);
    if (c_verify->parsed()) return verify.run(g);
    if (c_dickman->parsed()) return dickman.run(g);
    if (c_smooth->parsed()) return smooth.run(g);
    if (c_classify->parsed()) return classify.run(g);
  } catch (const Usage& u) {
    std::cerr << "error: " << u.message << "\n";
    return kUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.message << "\n";
    return exit_code(e.status);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  }
  return kUsage;
}
