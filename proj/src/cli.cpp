#include "bitprobe/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "bitprobe/bmrv.hpp"
#include "bitprobe/oracle.hpp"
#include "bitprobe/scheme_one.hpp"
#include "bitprobe/scheme_two.hpp"
#include "bitprobe/storage.hpp"

namespace bitprobe::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Parsed flags of one invocation. Defaults are shown by --help.
struct RunConfig {
  std::string kind = "one";
  unsigned universe_bits = 0;
  std::string eps = "1/2";
  std::string input;
  std::string output;
  std::uint64_t master_seed = 0;
  std::uint32_t max_retries = 64;
  std::size_t indep_k = 0;
  std::uint64_t n_cap = 0;
  std::uint64_t trials = 1;
  bool exact = false;
  // query
  std::uint64_t element = 0;
  std::vector<std::uint64_t> probes;
  // verify
  std::string csv;
  // bench
  std::vector<unsigned> grid_u;
  std::vector<std::uint64_t> grid_n;
  std::vector<std::string> grid_eps;
  std::vector<std::string> grid_kind;
  std::uint64_t queries = 10000;
};

Ratio parse_eps(const std::string& text) {
  Ratio eps;
  try {
    eps = Ratio::parse(text);
  } catch (const ParamError&) {
    throw InputError("--eps must look like num/den, got '" + text + "'");
  }
  if (!eps.is_proper()) {
    throw InputError("--eps must lie strictly between 0 and 1, got " + text);
  }
  return eps;
}

AnyScheme build_scheme(const std::string& kind, const VertexSet& a, unsigned u, Ratio eps,
                       const RunConfig& cfg) {
  EncodeConfig ec{cfg.n_cap, cfg.indep_k, cfg.master_seed, cfg.max_retries};
  if (kind == "one") {
    return OneProbeScheme::encode(a, u, eps, ec);
  }
  if (kind == "two") {
    return TwoProbeScheme::encode(a, u, eps, ec);
  }
  if (kind == "bmrv") {
    BmrvConfig bc;
    bc.n_cap = cfg.n_cap;
    bc.indep_k = cfg.indep_k;
    bc.master_seed = cfg.master_seed;
    bc.max_retries = cfg.max_retries;
    return BmrvScheme::encode(a, u, eps, bc);
  }
  throw InputError("unknown scheme kind '" + kind + "' (expected one, two or bmrv)");
}

std::uint64_t bitmap_bits(const AnyScheme& s) {
  return std::visit(
      [](const auto& x) -> std::uint64_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BmrvScheme>) {
          return x.labels().size();
        } else {
          return x.bitmap_bits();
        }
      },
      s);
}

std::uint64_t cache_bits(const AnyScheme& s) {
  return std::visit(
      [](const auto& x) -> std::uint64_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BmrvScheme>) {
          return x.graph().seed().bit_size();
        } else {
          return x.cache_bits();
        }
      },
      s);
}

const GraphParams& first_params(const AnyScheme& s) {
  return std::visit(
      [](const auto& x) -> const GraphParams& {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TwoProbeScheme>) {
          return x.g1().params();
        } else {
          return x.params();
        }
      },
      s);
}

ErrorProfile profile_of(const AnyScheme& s, const VertexSet& a, const OracleBudget& budget) {
  return std::visit([&](const auto& x) { return error_profile(x, a, budget); }, s);
}

/// Kinds 1 and 2 promise one-sided error below ε; the labeling baseline is
/// two-sided, so members may err as well, but still below ε.
bool guarantee_holds(const AnyScheme& s, const ErrorProfile& p, Ratio eps) {
  if (kind_of(s) == SchemeKind::bmrv) {
    return p.max_member_error < eps && p.max_nonmember_error < eps;
  }
  return p.false_negative_count == 0 && p.max_nonmember_error < eps;
}

std::string kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::one_probe:
      return "one";
    case SchemeKind::two_probe:
      return "two";
    case SchemeKind::bmrv:
      return "bmrv";
  }
  return "?";
}

AnyScheme load_scheme(const std::string& path) { return load(read_file(path)); }

int cmd_build(const RunConfig& cfg, std::ostream& out) {
  const Ratio eps = parse_eps(cfg.eps);
  const VertexSet a = read_set_file(cfg.input, cfg.universe_bits);
  const auto start = Clock::now();
  const AnyScheme scheme = build_scheme(cfg.kind, a, cfg.universe_bits, eps, cfg);
  const double wall = ms_since(start);
  write_file(cfg.output, save(scheme));

  out << "kind=" << kind_name(kind_of(scheme)) << " n=" << a.size()
      << " bitmap_bits=" << bitmap_bits(scheme) << " cache_bits=" << cache_bits(scheme);
  if (const auto* one = std::get_if<OneProbeScheme>(&scheme)) {
    out << " retries_used=" << one->retries_used();
  } else if (const auto* two = std::get_if<TwoProbeScheme>(&scheme)) {
    out << " retries_used=" << two->stats().stage1_attempts + two->stats().stage2_attempts
        << " stage1_retries=" << two->stats().stage1_attempts
        << " stage2_retries=" << two->stats().stage2_attempts << " w_size=" << two->w_size();
  } else if (const auto* bm = std::get_if<BmrvScheme>(&scheme)) {
    out << " retries_used=" << bm->retries_used() << " iterations=" << bm->iterations();
  }
  out << " wall_ms=" << wall << "\n";
  return kExitOk;
}

int cmd_query(const RunConfig& cfg, std::ostream& out) {
  const AnyScheme scheme = load_scheme(cfg.input);
  const auto& p = first_params(scheme);
  const LeftVertex x = cfg.element;
  if (x >= p.m) {
    throw InputError("element " + std::to_string(x) + " outside universe of " + std::to_string(p.m));
  }
  ProbeSource probes(cfg.master_seed);

  if (const auto* two = std::get_if<TwoProbeScheme>(&scheme)) {
    const std::uint64_t d1 = two->g1().params().d;
    const std::uint64_t d2 = two->g2().params().d;
    const std::uint64_t i1 = cfg.probes.size() > 0 ? cfg.probes[0] : probes.next(d1);
    const std::uint64_t i2 = cfg.probes.size() > 1 ? cfg.probes[1] : probes.next(d2);
    if (i1 >= d1 || i2 >= d2) {
      throw InputError("probe index out of range");
    }
    CountingReader reader;
    std::vector<std::pair<int, RightVertex>> trace;
    const bool answer = two->query_at(x, i1, i2, [&](const Bitmap& bits, RightVertex pos) {
      trace.emplace_back(&bits == &two->b1() ? 1 : 2, pos);
      return reader(bits, pos);
    });
    out << "answer=" << (answer ? "true" : "false") << " probe1=" << i1 << " probe2=" << i2;
    for (const auto& [stage, pos] : trace) {
      out << " read" << stage << "=" << pos;
    }
    out << " bits_read=" << reader.reads() << "\n";
  } else {
    const std::uint64_t d = p.d;
    const std::uint64_t i = cfg.probes.empty() ? probes.next(d) : cfg.probes[0];
    if (i >= d) {
      throw InputError("probe index out of range");
    }
    const RightVertex pos = std::visit([&](const auto& s) -> RightVertex {
      using T = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<T, TwoProbeScheme>) {
        return 0;
      } else {
        return s.position(x, i);
      }
    }, scheme);
    const bool answer = std::visit([&](const auto& s) -> bool {
      using T = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<T, TwoProbeScheme>) {
        return false;
      } else {
        return s.query_at(x, i);
      }
    }, scheme);
    out << "answer=" << (answer ? "true" : "false") << " probe=" << i << " read=" << pos
        << " bits_read=1\n";
  }

  auto sample = [&](ProbeSource& src) {
    return std::visit([&](const auto& s) -> bool {
      using T = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<T, BmrvScheme>) {
        return s.query_at(x, src.next(s.params().d));
      } else {
        return s.query(x, src);
      }
    }, scheme);
  };

  if (cfg.exact) {
    // Every probe index (or index pair) exactly once.
    std::uint64_t positives = 0;
    std::uint64_t total = 0;
    if (const auto* two = std::get_if<TwoProbeScheme>(&scheme)) {
      const std::uint64_t d1 = two->g1().params().d;
      const std::uint64_t d2 = two->g2().params().d;
      std::vector<RightVertex> p1(d1);
      std::vector<RightVertex> p2(d2);
      two->g1().neighbors(x, p1);
      two->g2().neighbors(x, p2);
      for (std::uint64_t a1 = 0; a1 < d1; ++a1) {
        for (std::uint64_t a2 = 0; a2 < d2; ++a2) {
          positives += (two->b1().test(p1[a1]) && two->b2().test(p2[a2])) ? 1 : 0;
        }
      }
      total = d1 * d2;
    } else {
      for (std::uint64_t i = 0; i < p.d; ++i) {
        positives += std::visit([&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, TwoProbeScheme>) {
            return false;
          } else {
            return s.query_at(x, i);
          }
        }, scheme) ? 1 : 0;
      }
      total = p.d;
    }
    const Ratio rate(positives, total);
    out << "exact_positive_rate=" << rate.to_string() << " below_eps=" << (rate < p.eps ? "true" : "false")
        << "\n";
  } else if (cfg.trials > 1) {
    ProbeSource src(cfg.master_seed + 1);
    std::uint64_t positives = 0;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
      positives += sample(src) ? 1 : 0;
    }
    out << "positive_rate=" << static_cast<double>(positives) / static_cast<double>(cfg.trials)
        << " positives=" << positives << " trials=" << cfg.trials << "\n";
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const AnyScheme scheme = load_scheme(cfg.input);
  const auto& p = first_params(scheme);
  const VertexSet a = read_set_file(cfg.output, p.universe_bits());
  const ErrorProfile profile = profile_of(scheme, a, OracleBudget::from_env());

  std::ofstream file;
  std::ostream* csv = &out;
  if (!cfg.csv.empty()) {
    file.open(cfg.csv, std::ios::trunc);
    if (!file) {
      throw InputError("cannot open " + cfg.csv);
    }
    csv = &file;
  }
  *csv << "element,membership,exact_error_num,exact_error_den\n";
  for (LeftVertex x = 0; x < profile.per_element.size(); ++x) {
    const Ratio& e = profile.per_element[x];
    *csv << x << ',' << (a.contains(x) ? 1 : 0) << ',' << e.num() << ',' << e.den() << '\n';
  }
  csv->flush();

  const bool ok = guarantee_holds(scheme, profile, p.eps);
  err << "verify: " << (ok ? "pass" : "FAIL") << " kind=" << kind_name(kind_of(scheme))
      << " false_negatives=" << profile.false_negative_count
      << " max_member_error=" << profile.max_member_error.to_string()
      << " max_nonmember_error=" << profile.max_nonmember_error.to_string()
      << " eps=" << p.eps.to_string() << "\n";
  return ok ? kExitOk : kExitGuaranteeViolated;
}

std::string csv_safe(std::string s) {
  for (auto& c : s) {
    if (c == ',' || c == '\n' || c == '"') c = ' ';
  }
  return s;
}

VertexSet random_set(std::uint64_t n, std::uint64_t m, SeedRng& rng) {
  std::unordered_set<LeftVertex> picked;
  std::uniform_int_distribution<std::uint64_t> pick(0, m - 1);
  while (picked.size() < n) {
    picked.insert(pick(rng));
  }
  return VertexSet(std::vector<LeftVertex>(picked.begin(), picked.end()));
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  std::ofstream file;
  std::ostream* csv = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::trunc);
    if (!file) {
      throw InputError("cannot open " + cfg.output);
    }
    csv = &file;
  }
  std::vector<Ratio> eps_list;
  for (const auto& e : cfg.grid_eps) {
    eps_list.push_back(parse_eps(e));
  }
  const std::vector<std::string> kinds = cfg.grid_kind.empty() ? std::vector<std::string>{"one"}
                                                                : cfg.grid_kind;
  const OracleBudget budget = OracleBudget::from_env();

  *csv << "u,n,eps,kind,bitmap_bits,cache_bits,retries_mean,max_error,encode_ms,query_ns,"
          "acceptance_rate,status\n";
  std::uint64_t cell = 0;
  for (unsigned u : cfg.grid_u) {
    for (std::uint64_t n : cfg.grid_n) {
      for (const Ratio& eps : eps_list) {
        for (const auto& kind : kinds) {
          ++cell;
          *csv << u << ',' << n << ',' << eps.to_string() << ',' << kind << ',';
          try {
            if (u < 1 || u > 40 || n > (std::uint64_t{1} << u)) {
              throw InputError("n exceeds the universe or u out of range");
            }
            auto rng = make_seed_rng(cfg.master_seed, 1000 + cell);
            std::uint64_t seeds_tried = 0;
            double encode_ms = 0;
            double query_ns = 0;
            std::optional<Ratio> max_error;
            std::uint64_t bm_bits = 0;
            std::uint64_t c_bits = 0;
            std::string note;
            for (std::uint64_t t = 0; t < cfg.trials; ++t) {
              const VertexSet a = random_set(n, std::uint64_t{1} << u, rng);
              RunConfig local = cfg;
              local.master_seed = rng();
              local.n_cap = n == 0 ? 1 : n;
              const auto start = Clock::now();
              const AnyScheme scheme = build_scheme(kind, a, u, eps, local);
              encode_ms += ms_since(start);
              bm_bits = bitmap_bits(scheme);
              c_bits = cache_bits(scheme);
              seeds_tried += std::visit([](const auto& s) -> std::uint64_t {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, TwoProbeScheme>) {
                  return s.stats().stage1_attempts;
                } else {
                  return s.retries_used();
                }
              }, scheme);

              ProbeSource src(local.master_seed);
              std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << u) - 1);
              std::mt19937_64 xs(local.master_seed);
              std::uint64_t sink = 0;
              const auto qstart = Clock::now();
              for (std::uint64_t q = 0; q < cfg.queries; ++q) {
                const LeftVertex x = pick(xs);
                sink += std::visit([&](const auto& s) -> bool {
                  using T = std::decay_t<decltype(s)>;
                  if constexpr (std::is_same_v<T, BmrvScheme>) {
                    return s.query_at(x, src.next(s.params().d));
                  } else {
                    return s.query(x, src);
                  }
                }, scheme) ? 1 : 0;
              }
              if (cfg.queries > 0) {
                query_ns += std::chrono::duration<double, std::nano>(Clock::now() - qstart).count() /
                            static_cast<double>(cfg.queries);
              }
              (void)sink;
              try {
                const auto profile = profile_of(scheme, a, budget);
                const Ratio worst = std::max(profile.max_nonmember_error, profile.max_member_error);
                max_error = max_error ? std::max(*max_error, worst) : worst;
              } catch (const BudgetExceeded&) {
                note = "error profile over budget";
              }
            }
            const double trials = static_cast<double>(cfg.trials);
            *csv << bm_bits << ',' << c_bits << ','
                 << (cfg.trials ? static_cast<double>(seeds_tried) / trials : 0.0) << ','
                 << (max_error ? max_error->to_string() : "NA") << ','
                 << (cfg.trials ? encode_ms / trials : 0.0) << ','
                 << (cfg.trials ? query_ns / trials : 0.0) << ','
                 << (seeds_tried ? trials / static_cast<double>(seeds_tried) : 0.0) << ','
                 << (note.empty() ? "ok" : csv_safe(note)) << '\n';
          } catch (const std::exception& e) {
            *csv << ",,,,,,," << csv_safe(std::string("error: ") + e.what()) << '\n';
          }
        }
      }
    }
  }
  return kExitOk;
}

}  // namespace

VertexSet read_set_file(const std::filesystem::path& path, unsigned universe_bits) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open set file " + path.string());
  }
  const std::uint64_t m = universe_bits >= 64 ? 0 : std::uint64_t{1} << universe_bits;
  std::set<LeftVertex> seen;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      continue;
    }
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": not a non-negative integer");
    }
    if (m != 0 && value >= m) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": element " +
                       std::to_string(value) + " overflows a universe of 2^" +
                       std::to_string(universe_bits));
    }
    if (!seen.insert(value).second) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": duplicate element " +
                       std::to_string(value));
    }
  }
  return VertexSet(std::vector<LeftVertex>(seen.begin(), seen.end()));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bit-probe membership schemes with a cached seed word"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* build = app.add_subcommand("build", "Encode a set file into a scheme file");
  build->add_option("--kind", cfg.kind, "Scheme kind: one, two or bmrv")
      ->capture_default_str()
      ->check(CLI::IsMember({"one", "two", "bmrv"}));
  build->add_option("-u,--universe-bits", cfg.universe_bits, "Universe size m = 2^u")->required();
  build->add_option("--eps", cfg.eps, "Error bound as num/den")->capture_default_str();
  build->add_option("-i,--input", cfg.input, "Set file, one element per line")->required();
  build->add_option("-o,--output", cfg.output, "Scheme file to write")->required();
  build->add_option("--seed", cfg.master_seed, "Master seed for candidate seeds")->capture_default_str();
  build->add_option("--max-retries", cfg.max_retries, "Seeds tried per stage")->capture_default_str();
  build->add_option("--indep-k", cfg.indep_k, "Seed length; 0 means u^2")->capture_default_str();
  build->add_option("--n-cap", cfg.n_cap, "Set capacity; 0 means the set size")->capture_default_str();

  auto* query = app.add_subcommand("query", "Answer a membership query");
  query->add_option("-s,--scheme", cfg.input, "Scheme file")->required();
  query->add_option("-x,--element", cfg.element, "Element to query")->required();
  query->add_option("--probe", cfg.probes, "Fixed probe index (repeat for the second probe)");
  query->add_option("--trials", cfg.trials, "Independent random queries for a positive rate")
      ->capture_default_str();
  query->add_flag("--exact", cfg.exact, "Enumerate every probe index for the exact positive rate");
  query->add_option("--seed", cfg.master_seed, "Probe randomness seed")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Exhaustively check the error guarantee");
  verify->add_option("-s,--scheme", cfg.input, "Scheme file")->required();
  verify->add_option("-i,--input", cfg.output, "Set file the scheme was built from")->required();
  verify->add_option("--csv", cfg.csv, "Write the per-element profile here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Space/error/time table over a parameter grid");
  bench->add_option("--u", cfg.grid_u, "Universe bits (comma separated)")->delimiter(',');
  bench->add_option("--n", cfg.grid_n, "Set sizes (comma separated)")->delimiter(',');
  bench->add_option("--eps", cfg.grid_eps, "Error bounds num/den (comma separated)")->delimiter(',');
  bench->add_option("--kind", cfg.grid_kind, "Scheme kinds (default one)")->delimiter(',');
  bench->add_option("--trials", cfg.trials, "Random sets per cell")->capture_default_str();
  bench->add_option("--queries", cfg.queries, "Timed queries per set")->capture_default_str();
  bench->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
  bench->add_option("--max-retries", cfg.max_retries, "Seeds tried per stage")->capture_default_str();
  bench->add_option("-o,--output", cfg.output, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(cfg, out);
    if (*query) return cmd_query(cfg, out);
    if (*verify) return cmd_verify(cfg, out, err);
    if (*bench) return cmd_bench(cfg, out);
  } catch (const RetriesExhausted& e) {
    err << "error: " << e.what() << "\n";
    return kExitEncodeFailed;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise BITPROBE_BUDGET to allow)\n";
    return kExitBudgetExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"bitprobe"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bitprobe::cli
