#include "selk/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace selk::harness {

using json = nlohmann::json;

void RunConfig::validate() const {
  if (a1 == a2 || a1 == a3 || a2 == a3) throw ConfigError("curve", "a1, a2, a3 must be distinct");
  if (theta == 0 || theta == 1 || !numtheory::is_squarefree(theta))
    throw ConfigError("theta", "must be squarefree and != 0, 1");
  if (range_max < 1) throw ConfigError("range_max", "must be positive");
  if (gamma_num < 1 || gamma_den < 1) throw ConfigError("gamma", "must be a positive rational");
  if (threads < 0) throw ConfigError("threads", "must be nonnegative");
}

curve::CurveData RunConfig::make_curve() const {
  validate();
  return curve::make_curve(a1, a2, a3, theta);
}

int RunConfig::effective_threads() const {
  if (threads > 0) return threads;
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::string line;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  auto to_int = [&](const std::string& key, const std::string& v) -> i64 {
    try {
      std::size_t pos = 0;
      i64 r = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError(key, "invalid integer '" + v + "'");
    }
  };
  auto to_bool = [&](const std::string& key, const std::string& v) -> bool {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ConfigError(key, "invalid boolean '" + v + "'");
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config", "expected key=value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "a1")
      cfg.a1 = to_int(key, val);
    else if (key == "a2")
      cfg.a2 = to_int(key, val);
    else if (key == "a3")
      cfg.a3 = to_int(key, val);
    else if (key == "theta")
      cfg.theta = to_int(key, val);
    else if (key == "range_max" || key == "xmax")
      cfg.range_max = to_int(key, val);
    else if (key == "gamma") {
      auto slash = val.find('/');
      if (slash == std::string::npos) {
        cfg.gamma_num = to_int(key, val);
        cfg.gamma_den = 1;
      } else {
        cfg.gamma_num = to_int(key, val.substr(0, slash));
        cfg.gamma_den = to_int(key, val.substr(slash + 1));
      }
    } else if (key == "gamma_num")
      cfg.gamma_num = to_int(key, val);
    else if (key == "gamma_den")
      cfg.gamma_den = to_int(key, val);
    else if (key == "threads")
      cfg.threads = static_cast<int>(to_int(key, val));
    else if (key == "exact_g")
      cfg.exact_g = to_bool(key, val);
    else if (key == "json")
      cfg.json = to_bool(key, val);
    else if (key == "out")
      cfg.out = val;
    else
      throw ConfigError(key, "unknown key");
  }
}

// --- sweep -----------------------------------------------------------------

namespace {

// Shared read-only sweep state: smallest-prime-factor sieve and per-prime
// partition class.
struct SweepEngine {
  curve::CurveData cv;
  std::optional<localdescent::Context> ctx;  // built only when exact g is on
  std::vector<std::int32_t> spf;
  std::vector<std::uint8_t> cls;  // indexed by prime value

  SweepEngine(const RunConfig& cfg) : cv(cfg.make_curve()) {
    i64 x = cfg.range_max;
    spf.assign(static_cast<std::size_t>(x) + 1, 0);
    for (i64 i = 2; i <= x; ++i) {
      if (spf[i] == 0) {
        for (i64 j = i; j <= x; j += i)
          if (spf[j] == 0) spf[j] = static_cast<std::int32_t>(i);
      }
    }
    cls.assign(static_cast<std::size_t>(x) + 1, 0);
    for (i64 p = 2; p <= x; ++p) {
      if (spf[p] == p) cls[p] = static_cast<std::uint8_t>(curve::prime_class(p, cv));
    }
    if (cfg.exact_g) ctx.emplace(cv);
  }

  // Prime factors of a squarefree |d| <= range_max; false if not squarefree.
  bool factor(i64 ad, std::vector<i64>& primes) const {
    primes.clear();
    while (ad > 1) {
      i64 p = spf[ad];
      ad /= p;
      if (ad % p == 0) return false;
      primes.push_back(p);
    }
    return true;
  }

  SweepRecord record(i64 ad, int sign, bool exact, const std::vector<i64>& primes) const {
    SweepRecord r;
    r.d = sign * ad;
    auto sf = numtheory::SquarefreeInt::from_primes(r.d, primes);
    auto t = curve::twist_decompose(sf, cv);
    r.omega0 = static_cast<int>(t.p0.size());
    r.omega1 = static_cast<int>(t.p1.size());
    r.omega2 = static_cast<int>(t.p2.size());
    r.omega_ek = r.omega2;
    r.g_surrogate = 2 * r.omega_ek;
    r.s_d_size = selmerq::S_d_group(cv, sf).size();
    r.sel_ctilde_dim = selmerq::sel_Ctilde(cv, sf).dim();
    if (exact && ctx) r.g_exact = ctx->g_exact(r.d);
    if (ad >= 3) r.ek_stat = selmerq::ek_statistic(r.d, r.g_surrogate);
    return r;
  }
};

constexpr i64 kBlock = 4096;

}  // namespace

std::vector<SweepRecord> sweep_records(const RunConfig& cfg) {
  cfg.validate();
  SweepEngine eng(cfg);
  i64 x = cfg.range_max;
  i64 nblocks = (x + kBlock - 1) / kBlock;
  std::vector<std::vector<SweepRecord>> blocks(static_cast<std::size_t>(nblocks));
  std::atomic<i64> next{0};
  int nthreads = cfg.effective_threads();
  auto worker = [&] {
    std::vector<i64> primes;
    for (i64 b; (b = next.fetch_add(1)) < nblocks;) {
      i64 lo = b * kBlock + 1, hi = std::min<i64>(x, (b + 1) * kBlock);
      auto& out = blocks[static_cast<std::size_t>(b)];
      for (i64 ad = lo; ad <= hi; ++ad) {
        if (!eng.factor(ad, primes)) continue;
        out.push_back(eng.record(ad, -1, cfg.exact_g, primes));
        out.push_back(eng.record(ad, +1, cfg.exact_g, primes));
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::vector<SweepRecord> all;
  for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
  return all;
}

SweepRecord recompute_record(const RunConfig& cfg, i64 d) {
  auto cv = cfg.make_curve();
  auto sf = numtheory::SquarefreeInt::make(d);
  auto t = curve::twist_decompose(sf, cv);
  SweepRecord r;
  r.d = d;
  r.omega0 = static_cast<int>(t.p0.size());
  r.omega1 = static_cast<int>(t.p1.size());
  r.omega2 = static_cast<int>(t.p2.size());
  r.omega_ek = r.omega2;
  r.g_surrogate = 2 * r.omega_ek;
  r.s_d_size = selmerq::S_d_group(cv, sf).size();
  r.sel_ctilde_dim = selmerq::sel_Ctilde(cv, sf).dim();
  if (cfg.exact_g) {
    localdescent::Context ctx(cv);
    r.g_exact = ctx.g_exact(d);
  }
  if (std::abs(d) >= 3) r.ek_stat = selmerq::ek_statistic(d, r.g_surrogate);
  return r;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "d,omega0,omega1,omega2,omega_EK,s_d_size,sel_ctilde_dim,g_surrogate,g_exact,ek_stat\n";
  for (auto& r : records) {
    os << r.d << ',' << r.omega0 << ',' << r.omega1 << ',' << r.omega2 << ',' << r.omega_ek << ','
       << r.s_d_size << ',' << r.sel_ctilde_dim << ',' << r.g_surrogate << ',';
    if (r.g_exact) os << *r.g_exact;
    os << ',';
    if (r.ek_stat) os << fmt_double(*r.ek_stat);
    os << '\n';
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

EkReport ek_report(const std::vector<SweepRecord>& records) {
  EkReport rep;
  std::vector<double> xs;
  xs.reserve(records.size());
  for (auto& r : records)
    if (r.ek_stat) xs.push_back(*r.ek_stat);
  rep.n = xs.size();
  if (xs.empty()) return rep;
  double s1 = 0;
  for (double x : xs) s1 += x;
  rep.mean = s1 / static_cast<double>(xs.size());
  double c2 = 0, c3 = 0, c4 = 0;
  for (double x : xs) {
    double dx = x - rep.mean;
    c2 += dx * dx;
    c3 += dx * dx * dx;
    c4 += dx * dx * dx * dx;
  }
  double n = static_cast<double>(xs.size());
  rep.variance = c2 / n;
  double sd = std::sqrt(rep.variance);
  rep.skewness = (c3 / n) / (sd * sd * sd);
  rep.kurtosis = (c4 / n) / (rep.variance * rep.variance);
  for (double x : xs) {
    if (x < -4.0)
      ++rep.tail_lo;
    else if (x >= 4.0)
      ++rep.tail_hi;
    else
      ++rep.buckets[static_cast<std::size_t>((x + 4.0) / 0.25)];
  }
  std::sort(xs.begin(), xs.end());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = normal_cdf(xs[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  rep.ks_distance = d;
  return rep;
}

double mertens_p2_sum(const curve::CurveData& c, i64 x) {
  std::vector<bool> comp(static_cast<std::size_t>(x) + 1, false);
  for (i64 i = 2; i * i <= x; ++i)
    if (!comp[i])
      for (i64 j = i * i; j <= x; j += i) comp[j] = true;
  double s = 0;
  for (i64 p = 2; p <= x; ++p) {
    if (!comp[p] && curve::prime_class(p, c) == curve::PrimeClass::P2)
      s += 1.0 / (static_cast<double>(p) + 1.0);
  }
  return s;
}

// --- drivers ----------------------------------------------------------------

namespace {

// Runs fn against the configured output stream; maps failures to exit codes.
template <typename Fn>
int with_output(const RunConfig& cfg, Fn fn) {
  if (cfg.out.empty() || cfg.out == "-") {
    fn(std::cout);
    std::cout.flush();
    return std::cout ? kExitOk : kExitIo;
  }
  std::ofstream os(cfg.out);
  if (!os) {
    std::cerr << "error: cannot open output file " << cfg.out << "\n";
    return kExitIo;
  }
  fn(os);
  os.flush();
  if (!os) {
    std::cerr << "error: failed writing " << cfg.out << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int run_sweep(const RunConfig& cfg) {
  auto records = sweep_records(cfg);
  return with_output(cfg, [&](std::ostream& os) { write_sweep_csv(os, records); });
}

int run_ek_stats(const RunConfig& cfg) {
  if (cfg.range_max < 1000) throw ConfigError("range_max", "ek-stats needs range_max >= 1000");
  auto records = sweep_records(cfg);
  EkReport rep = ek_report(records);
  int rc = with_output(cfg, [&](std::ostream& os) {
    if (cfg.json) {
      json j;
      j["moments"] = {rep.mean, rep.variance, rep.skewness, rep.kurtosis};
      j["ks_distance"] = rep.ks_distance;
      json buckets = json::array();
      buckets.push_back({{"lo", nullptr}, {"hi", -4.0}, {"count", rep.tail_lo}});
      for (std::size_t i = 0; i < rep.buckets.size(); ++i) {
        double lo = -4.0 + 0.25 * static_cast<double>(i);
        buckets.push_back({{"lo", lo}, {"hi", lo + 0.25}, {"count", rep.buckets[i]}});
      }
      buckets.push_back({{"lo", 4.0}, {"hi", nullptr}, {"count", rep.tail_hi}});
      j["buckets"] = buckets;
      j["n"] = rep.n;
      os << j.dump(2) << '\n';
    } else {
      os << "bucket_lo,bucket_hi,count\n";
      os << "-inf,-4," << rep.tail_lo << '\n';
      for (std::size_t i = 0; i < rep.buckets.size(); ++i) {
        double lo = -4.0 + 0.25 * static_cast<double>(i);
        os << fmt_double(lo) << ',' << fmt_double(lo + 0.25) << ',' << rep.buckets[i] << '\n';
      }
      os << "4,inf," << rep.tail_hi << '\n';
    }
  });
  if (rc == kExitOk && !cfg.json) {
    std::cerr << "n=" << rep.n << " moments (normal reference 0,1,0,3): " << fmt_double(rep.mean)
              << ", " << fmt_double(rep.variance) << ", " << fmt_double(rep.skewness) << ", "
              << fmt_double(rep.kurtosis) << "; deltas " << fmt_double(rep.mean - 0) << ", "
              << fmt_double(rep.variance - 1) << ", " << fmt_double(rep.skewness - 0) << ", "
              << fmt_double(rep.kurtosis - 3) << "; KS=" << fmt_double(rep.ks_distance) << "\n";
  }
  return rc;
}

int run_cnc_densities(const RunConfig& cfg) {
  if (!cncdescent::admissible_theta(cfg.theta))
    throw ConfigError("theta", "must be one of -3,-11,-19,-43,-67,-163");
  auto table = cncdescent::density_sweep_cnc(cfg.theta, cfg.range_max);
  return with_output(cfg, [&](std::ostream& os) {
    long long stratum = table.split_1mod8_square + table.split_1mod8_nonsquare;
    if (cfg.json) {
      json j;
      j["theta"] = table.theta;
      j["x"] = table.x;
      j["total"] = table.total;
      json rows = json::array();
      for (auto& [key, count] : table.counts) {
        rows.push_back({{"e1", key.first},
                        {"e2", key.second},
                        {"count", count},
                        {"proportion", static_cast<double>(count) / table.total}});
      }
      j["classes"] = rows;
      j["split_1mod8"] = {{"square", table.split_1mod8_square},
                          {"nonsquare", table.split_1mod8_nonsquare},
                          {"square_fraction",
                           stratum ? static_cast<double>(table.split_1mod8_square) / stratum : 0.0}};
      os << j.dump(2) << '\n';
    } else {
      os << "e1,e2,count,proportion\n";
      for (auto& [key, count] : table.counts) {
        os << key.first << ',' << key.second << ',' << count << ','
           << fmt_double(static_cast<double>(count) / table.total) << '\n';
      }
      os << "# split p=1 mod 8 stratum: square=" << table.split_1mod8_square
         << " nonsquare=" << table.split_1mod8_nonsquare << " square_fraction="
         << fmt_double(stratum ? static_cast<double>(table.split_1mod8_square) / stratum : 0.0)
         << '\n';
    }
  });
}

int run_identity_check(const RunConfig& cfg, const std::vector<i64>& xs) {
  for (i64 x : xs)
    if (x < 1 || x > 200) throw ConfigError("xmax", "identity-check X values must be in [1, 200]");
  auto cv = cfg.make_curve();
  jacobisums::Rational gamma(cfg.gamma_num, cfg.gamma_den);
  bool all_equal = true;
  json jrows = json::array();
  std::ostringstream text;
  for (i64 x : xs) {
    auto rep = jacobisums::verify_identity(cv, gamma, jacobisums::Rational(x));
    all_equal = all_equal && rep.equal;
    std::ostringstream l, r;
    l << rep.lhs;
    r << rep.rhs;
    jrows.push_back({{"x", x}, {"lhs", l.str()}, {"rhs", r.str()}, {"equal", rep.equal}});
    text << "X=" << x << " lhs=" << l.str() << " rhs=" << r.str()
         << (rep.equal ? " equal" : " UNEQUAL") << '\n';
  }
  int rc = with_output(cfg, [&](std::ostream& os) {
    if (cfg.json)
      os << jrows.dump(2) << '\n';
    else
      os << text.str();
  });
  if (rc != kExitOk) return rc;
  return all_equal ? kExitOk : kExitCheckFailed;
}

int run_selmer_of_d(const RunConfig& cfg, i64 d) {
  auto cv = cfg.make_curve();
  auto sf = numtheory::SquarefreeInt::make(d);
  auto t = curve::twist_decompose(sf, cv);
  auto sd = selmerq::S_d_group(cv, sf);
  auto sel = selmerq::sel_Ctilde(cv, sf);
  std::optional<int> ge;
  if (cfg.exact_g) {
    localdescent::Context ctx(cv);
    ge = ctx.g_exact(d);
  }
  return with_output(cfg, [&](std::ostream& os) {
    if (cfg.json) {
      json j;
      j["d"] = d;
      j["decomposition"] = {{"a", t.a}, {"d0", t.d0}, {"d1", t.d1}, {"d2", t.d2}};
      j["s_d"] = {{"size", sd.size()}, {"members", sd.members()}};
      json mem = json::array();
      for (auto& [x1, x2] : sel.members()) mem.push_back({x1, x2});
      j["sel_ctilde"] = {{"dim", sel.dim()}, {"members", mem}};
      j["g_surrogate"] = selmerq::g_surrogate(cv, d);
      if (ge) j["g_exact"] = *ge;
      if (std::abs(d) >= 3)
        j["ek_stat"] = selmerq::ek_statistic(d, 2 * curve::omega_EK(sf, cv));
      os << j.dump(2) << '\n';
    } else {
      os << "d = " << d << " = a*d0*d1*d2 with a=" << t.a << " d0=" << t.d0 << " d1=" << t.d1
         << " d2=" << t.d2 << '\n';
      os << "S_d (size " << sd.size() << "):";
      for (auto x : sd.members()) os << ' ' << x;
      os << '\n';
      os << "Sel_Ctilde_d: dim " << sel.dim() << '\n';
      auto mem = sel.members();
      if (mem.size() <= 64) {
        for (auto& [x1, x2] : mem) os << "  (" << x1 << ", " << x2 << ")\n";
      } else {
        os << "  (" << mem.size() << " members; omitted)\n";
      }
      os << "g_surrogate = " << selmerq::g_surrogate(cv, d) << '\n';
      if (ge) os << "g_exact = " << *ge << '\n';
      if (std::abs(d) >= 3)
        os << "ek_stat = " << fmt_double(selmerq::ek_statistic(d, 2 * curve::omega_EK(sf, cv)))
           << '\n';
    }
  });
}

}  // namespace selk::harness
