#include "primlab/campaign.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "primlab/abundant.hpp"
#include "primlab/arithfun.hpp"
#include "primlab/bounds.hpp"
#include "primlab/primes.hpp"

namespace primlab::campaign {

namespace {

using arithfun::FactoredInteger;
using bounds::InequalityId;
using rigor::Interval;

struct Entry {
  bool is_check = false;
  std::string label;  // info entries carry their whole text here
  std::string expected;
  std::string actual;
};

struct Pipeline {
  std::vector<Entry> entries;
  void check(std::string label, std::string expected, std::string actual) {
    entries.push_back({true, std::move(label), std::move(expected), std::move(actual)});
  }
  void info(std::string text) { entries.push_back({false, std::move(text), "", ""}); }
};

mpq_class q_of(long num, long den) {
  mpq_class q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

std::string trunc_ratio(const mpq_class& q, int digits) {
  return Interval::of_mpq(q, 192).truncated_decimal(digits);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<mpz_class>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out;
}

void require_params(const Campaign& c, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : c.params) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok)
      throw std::invalid_argument("campaign " + c.name + ": unknown param " + k);
  }
}

mpz_class param_mpz(const Campaign& c, const std::string& key, long dflt) {
  auto it = c.params.find(key);
  if (it == c.params.end()) return mpz_class(dflt);
  return mpz_class(it->second, 10);  // base 10 even with leading zeros
}

// Loads (or builds, then stores) the champion record list for the limit.
std::vector<abundant::SARecord> sa_records(double limit,
                                           const CampaignOptions& opts) {
  std::string path;
  if (!opts.cache_dir.empty()) {
    path = opts.cache_dir + "/sa-" +
           std::to_string(static_cast<long long>(std::llround(limit * 10))) +
           ".tsv";
    if (std::filesystem::exists(path)) return abundant::read_sa_cache(path);
  }
  auto recs = abundant::enumerate_superabundant(limit, opts.workers);
  if (!path.empty()) {
    std::filesystem::create_directories(opts.cache_dir);
    abundant::write_sa_cache(path, recs);
  }
  return recs;
}

void progress(const CampaignOptions& opts, const std::string& text) {
  // stderr only: the report on stdout/file must stay byte-identical
  if (opts.long_mode) std::cerr << "progress: " << text << "\n";
}

// ---- recorded expectations ---------------------------------------------

const char kExceptionList[] =
    "6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,26,27,28,29,30,"
    "36,42,48,60,72,80,84,90,96,108,120,126,132,140,144,150,156,160,168,180,"
    "192,198,200,204,1680";

const char kChampion133[] =
    "2^9 * 3^5 * 5^3 * 7^2 * 11^2 * 13^2 * 17 * 19 * 23 * 29 * 31 * 37 * 41 * "
    "43 * 47 * 53 * 59 * 61 * 67 * 71 * 73 * 79 * 83 * 89 * 97 * 101 * 103 * "
    "107 * 109 * 113 * 127 * 131 * 137 * 139 * 149";

struct PrintedRow {
  unsigned a;
  unsigned b;
  const char* log10_nb;
  unsigned m;
  const char* log10_sa;
  const char* ratio;
  const char* threshold;
};

// Divisor-sum table rows against exp(gamma) F(a); the a = 58 threshold cell
// is the honestly recomputed value (the recorded source repeats the a = 59
// figure there, a typo documented in the README).
const PrintedRow kTableF[] = {
    {59, 60, "115.391780", 784, "115.415202", "9.849479", "9.875818"},
    {58, 59, "112.943073", 766, "113.015528", "9.810393", "9.835956"},
    {57, 58, "110.500593", 749, "110.676077", "9.771724", "9.795336"},
    {56, 57, "108.067624", 733, "108.095692", "9.730790", "9.753928"},
    {55, 56, "105.637872", 717, "105.717294", "9.690245", "9.711702"},
    {54, 55, "103.217916", 700, "103.247276", "9.644670", "9.668625"},
    {53, 54, "100.807983", 684, "100.887440", "9.602737", "9.624664"},
    {52, 53, "98.408309", 669, "98.531414", "9.560620", "9.579781"},
    {51, 52, "96.026292", 652, "96.183110", "9.517938", "9.533938"},
    {50, 51, "93.647894", 633, "93.660459", "9.467867", "9.487093"},
    {49, 50, "91.280538", 618, "91.361606", "9.420528", "9.439203"},
    {48, 49, "88.920703", 601, "89.067140", "9.372950", "9.390220"},
    {47, 48, "86.564677", 579, "86.582010", "9.322341", "9.340094"},
    {46, 47, "84.216372", 558, "84.221796", "9.272648", "9.288772"},
    {45, 46, "81.892090", 540, "81.964117", "9.221700", "9.236195"},
    {44, 45, "79.593237", 522, "79.711264", "9.170468", "9.182303"},
    {43, 44, "77.298770", 505, "77.473218", "9.117764", "9.127029"},
    {42, 43, "75.013213", 490, "75.028653", "9.060176", "9.070301"},
    {41, 42, "72.732180", 472, "72.777015", "9.004245", "9.012042"},
    {40, 41, "70.474501", 456, "70.564827", "8.949341", "8.952168"},
};

// Same layout against G(a); above a = 28 the b column steps by two.
const PrintedRow kTableG[] = {
    {37, 39, "65.983602", 426, "66.189950", "8.834195", "8.858198"},
    {35, 37, "61.548698", 395, "61.572719", "8.708363", "8.726022"},
    {33, 35, "57.173821", 369, "57.318728", "8.579765", "8.585262"},
    {31, 33, "52.857620", 343, "52.860815", "8.429814", "8.434750"},
    {29, 31, "48.603628", 316, "48.617914", "8.261174", "8.273065"},
    {28, 29, "44.446746", 292, "44.475817", "8.100022", "8.187500"},
    {27, 28, "42.409320", 280, "42.489045", "8.017368", "8.098451"},
    {26, 27, "40.379936", 268, "40.539655", "7.928286", "8.005631"},
    {25, 26, "38.367099", 253, "38.384319", "7.825677", "7.908711"},
    {24, 25, "36.362777", 239, "36.465241", "7.732514", "7.807320"},
    {23, 24, "34.376006", 225, "34.391522", "7.629811", "7.701036"},
    {22, 23, "32.426616", 213, "32.528199", "7.526706", "7.589372"},
    {21, 22, "30.507538", 197, "30.676941", "7.422168", "7.471768"},
    {20, 21, "28.609911", 182, "28.850866", "7.313019", "7.347570"},
    {19, 20, "26.746588", 167, "26.764506", "7.180986", "7.216013"},
    {18, 19, "24.895329", 153, "24.896744", "7.036674", "7.076191"},
    {17, 18, "23.069254", 142, "23.172469", "6.906365", "6.927020"},
    {16, 17, "21.283925", 130, "21.296251", "6.759540", "6.767193"},
};

// ---- table machinery -----------------------------------------------------

struct ComputedRow {
  unsigned a, b;
  std::string log10_nb;
  std::uint64_t m;
  std::string log10_sa;
  std::string ratio;
  std::string threshold;
  bool ratio_below;
};

bool is_table_name(const std::string& name) {
  return name == "thm104-tables" || name == "cor105-tables";
}

void require_table_unlocked(const std::string& name,
                            const CampaignOptions& opts) {
  if (name == "thm104-tables" && !opts.long_mode)
    throw std::invalid_argument(
        "thm104-tables needs --long: its champion list goes past log10 100");
}

std::vector<ComputedRow> table_rows(const std::string& name,
                                    const CampaignOptions& opts) {
  require_table_unlocked(name, opts);
  bool f_side = name == "thm104-tables";
  double limit = f_side ? 115.5 : 67.0;
  progress(opts, name + ": building champion records to log10 " +
                     std::to_string(limit));
  auto recs = sa_records(limit, opts);
  const PrintedRow* rows = f_side ? kTableF : kTableG;
  std::size_t n = f_side ? std::size(kTableF) : std::size(kTableG);
  auto kind = f_side ? abundant::RowThreshold::ExpGammaF
                     : abundant::RowThreshold::G;
  std::vector<ComputedRow> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = abundant::sa_interval_bound(rows[i].a, rows[i].b, kind, recs,
                                           opts.precision_bits);
    out.push_back({rows[i].a, rows[i].b, row.log10_nb.truncated_decimal(6),
                   row.m, row.log10_sa.truncated_decimal(6),
                   trunc_ratio(row.ratio, 6), row.threshold.truncated_decimal(6),
                   row.ratio_below});
  }
  return out;
}

// ---- campaigns -----------------------------------------------------------

void run_thm101(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {"lo", "hi"});
  mpz_class lo = param_mpz(c, "lo", 700000);
  mpz_class hi = param_mpz(c, "hi", 1000000);
  if (lo < 2 || lo >= hi)
    throw std::invalid_argument("thm101-threshold: need 2 <= lo < hi");

  auto at = bounds::check_inequality(InequalityId::INEQ_2_3, mpz_class(740321),
                                     opts.precision_bits,
                                     opts.max_precision_bits);
  p.check("verdict-at-740321", "Fails", bounds::check_result_name(at));

  auto thr = bounds::find_threshold(InequalityId::INEQ_2_3, lo, hi);
  p.check("threshold", "740322", thr.threshold.get_str());
  p.info(thr.to_json(true));

  mpz_class scan_hi = opts.long_mode ? mpz_class(564397542) : hi;
  progress(opts, "thm101-threshold: scanning k in [740322, " +
                     scan_hi.get_str() + "]");
  auto hold =
      bounds::scan_range(InequalityId::INEQ_2_3, mpz_class(740322), scan_hi,
                         opts.precision_bits, opts.workers,
                         opts.max_precision_bits);
  p.check("holds-above-threshold", "AllHold",
          bounds::verdict_name(hold.verdict));
  p.info(hold.to_json(true));
}

void run_tables(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  bool f_side = c.name == "thm104-tables";
  const PrintedRow* rows = f_side ? kTableF : kTableG;
  auto computed = table_rows(c.name, opts);
  for (std::size_t i = 0; i < computed.size(); ++i) {
    std::string at = "a=" + std::to_string(rows[i].a) + ":";
    p.check(at + "log10-Nb", rows[i].log10_nb, computed[i].log10_nb);
    p.check(at + "m", std::to_string(rows[i].m), std::to_string(computed[i].m));
    p.check(at + "log10-SAm", rows[i].log10_sa, computed[i].log10_sa);
    p.check(at + "ratio", rows[i].ratio, computed[i].ratio);
    p.check(at + "threshold", rows[i].threshold, computed[i].threshold);
    p.check(at + "ratio-below-threshold", "yes",
            yes_no(computed[i].ratio_below));
  }
}

void run_cor106(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  auto rep = bounds::scan_range(InequalityId::INEQ_1_9, mpz_class(6),
                                mpz_class(100000), opts.precision_bits,
                                opts.workers, opts.max_precision_bits);
  p.check("failure-count", "50", std::to_string(rep.failures.size()));
  p.check("failures", kExceptionList, join(rep.failures));
  p.info(rep.to_json(true));
}

void run_prop503(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  mpq_class eps = q_of(133, 100000);
  abundant::BenefitScanConfig cfg;
  cfg.reference = abundant::ca_number(eps, opts.precision_bits);
  cfg.epsilon = eps;
  cfg.budget = q_of(594, 1000000);
  cfg.lo = cfg.reference.n.value();
  cfg.hi = arithfun::primorial(39).value();
  auto hits = abundant::benefit_scan(cfg);

  p.check("hit-count", "2", std::to_string(hits.size()));
  const char* expected_hits[] = {
      "784714446890637903420295269527319214454331435407601866373848256000",
      "815895153389603647927061968978735871982318114960221808084067392000"};
  for (std::size_t i = 0; i < hits.size() && i < 2; ++i)
    p.check("hit-" + std::to_string(i + 1), expected_hits[i],
            hits[i].value().get_str());
  if (hits.size() == 2) {
    std::string digits = hits[0].value().get_str();
    p.check("hit-1-digit-count", "66", std::to_string(digits.size()));
    p.check("hit-1-leading-digits", "7.847144",
            digits.substr(0, 1) + "." + digits.substr(1, 6));
    mpq_class gate = q_of(88272, 10000);
    p.check("hit-1-ratio-exceeds-8.8272", "yes",
            yes_no(arithfun::sigma_ratio(hits[0]) > gate));
    p.check("hit-2-ratio-exceeds-8.8272", "no",
            yes_no(arithfun::sigma_ratio(hits[1]) > gate));
  }
}

void run_prop601(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  mpq_class eps = q_of(65, 10000);
  abundant::BenefitScanConfig cfg;
  cfg.reference = abundant::ca_number(eps, opts.precision_bits);
  cfg.epsilon = eps;
  cfg.budget = q_of(7, 1000);
  cfg.lo = 2 * cfg.reference.n.value();  // the record right after the champion
  cfg.hi = arithfun::primorial(15).value();
  auto hits = abundant::benefit_scan(cfg);

  p.check("hit-count", "2", std::to_string(hits.size()));
  const char* expected_hits[] = {"497325836165558400", "521585633051683200"};
  for (std::size_t i = 0; i < hits.size() && i < 2; ++i)
    p.check("hit-" + std::to_string(i + 1), expected_hits[i],
            hits[i].value().get_str());
}

void run_prop505(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  auto below = bounds::check_inequality(InequalityId::INEQ_5_13,
                                        mpz_class(734169), opts.precision_bits,
                                        opts.max_precision_bits);
  p.check("verdict-at-734169", "Fails", bounds::check_result_name(below));
  auto rep = bounds::scan_range(InequalityId::INEQ_5_13, mpz_class(734170),
                                mpz_class(740321), opts.precision_bits,
                                opts.workers, opts.max_precision_bits);
  p.check("holds-734170-to-740321", "AllHold",
          bounds::verdict_name(rep.verdict));
  p.info(rep.to_json(true));
}

void run_theta(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {"limit"});
  mpz_class limit = param_mpz(c, "limit", 1000000000);
  if (limit < 2 || !limit.fits_ulong_p())
    throw std::invalid_argument("theta-check: limit out of range");
  progress(opts, "theta-check: scanning to " + limit.get_str());
  auto rep = primes::theta_lt_x_scan(limit.get_ui(), opts.precision_bits,
                                     opts.max_precision_bits, opts.cache_dir);
  p.check("verdict", "AllHold", bounds::verdict_name(rep.verdict));
  p.check("violations", "0", std::to_string(rep.failures.size()));
  p.info(rep.to_json(true));
}

void run_sa_build(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  double limit = opts.long_mode ? 115.5 : 70.6;
  progress(opts, "sa-build: enumerating to log10 " + std::to_string(limit));
  auto recs = sa_records(limit, opts);

  p.check("record-count", opts.long_mode ? "784" : "456",
          std::to_string(recs.size()));
  std::string first17 = "absent";
  if (recs.size() >= 17) {
    first17.clear();
    for (int i = 0; i < 17; ++i) {
      if (i) first17 += ",";
      first17 += recs[i].n.value().get_str();
    }
  }
  p.check("first-17", "1,2,4,6,12,24,36,48,60,120,180,240,360,720,840,1260,1680",
          first17);
  auto value_at = [&](std::size_t idx) {
    return recs.size() > idx ? recs[idx].n.value().get_str()
                             : std::string("absent");
  };
  p.check("sa106", "224403121196654400", value_at(105));
  p.check("sa107", "448806242393308800", value_at(106));
  if (recs.size() > 116) {
    p.check("sa106-ratio", "6.40729", trunc_ratio(recs[105].ratio, 5));
    p.check("sa117-log10", "19.264", recs[116].log10.truncated_decimal(3));
    p.check("sa117-ratio", "6.589", trunc_ratio(recs[116].ratio, 3));
  }
  if (opts.long_mode && recs.size() >= 784) {
    p.check("sa456-ratio", "8.949341", trunc_ratio(recs[455].ratio, 6));
    p.check("sa784-ratio", "9.849479", trunc_ratio(recs[783].ratio, 6));
    p.check("sa784-log10", "115.415202", recs[783].log10.truncated_decimal(6));
  }
}

void run_ca160(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  auto seq = abundant::ca_sequence(160, std::max<mpfr_prec_t>(
                                            opts.precision_bits, 192));
  p.check("count", "160", std::to_string(seq.size()));
  const char* first8[] = {"2", "6", "12", "60", "120", "360", "2520", "5040"};
  for (int i = 0; i < 8 && i < static_cast<int>(seq.size()); ++i)
    p.check("ca-" + std::to_string(i + 1), first8[i],
            seq[i].n.value().get_str());

  auto c133 = abundant::ca_number(q_of(133, 100000), opts.precision_bits);
  p.check("m-0.00133", kChampion133, c133.n.str());
  auto c65 = abundant::ca_number(q_of(65, 10000), opts.precision_bits);
  p.check("m-0.0065", "224403121196654400", c65.n.value().get_str());

  if (seq.size() == 160) {
    const Interval& lg = seq[159].n.log10();
    bool inside = Interval::certainly_less(q_of(326263, 1000), lg) &&
                  Interval::certainly_less(lg, q_of(326283, 1000));
    p.check("log10-ca160-within-326.263-326.283", "yes", yes_no(inside));
    p.check("log10-ca160", "326.273", lg.truncated_decimal(3));
  }
}

void run_robin_sa(const Campaign& c, const CampaignOptions& opts, Pipeline& p) {
  require_params(c, {});
  auto recs = sa_records(70.6, opts);
  std::size_t checked = 0, violations = 0;
  for (const auto& r : recs) {
    if (r.n.value() <= 5040) continue;
    ++checked;
    auto rv = abundant::robin_check(r.n, opts.precision_bits,
                                    opts.max_precision_bits);
    if (rv.verdict != bounds::CheckResult::Holds) ++violations;
  }
  p.check("checked-above-5040", "437", std::to_string(checked));
  p.check("violations-above-5040", "0", std::to_string(violations));
  auto at5040 = abundant::robin_check(arithfun::factorize(5040),
                                      opts.precision_bits,
                                      opts.max_precision_bits);
  p.check("verdict-at-5040", "Fails",
          bounds::check_result_name(at5040.verdict));
  p.check("in-domain-at-5040", "no", yes_no(at5040.in_domain));
}

// ---- rendering -----------------------------------------------------------

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

CampaignResult finish(const Campaign& c, const CampaignOptions& opts,
                      Pipeline& p) {
  if (opts.perturb >= 0) {
    std::size_t checks = 0;
    for (const Entry& e : p.entries)
      if (e.is_check) ++checks;
    if (checks > 0) {
      std::size_t target = static_cast<std::size_t>(opts.perturb) % checks;
      std::size_t seen = 0;
      for (Entry& e : p.entries) {
        if (!e.is_check) continue;
        if (seen++ == target) {
          e.expected += "*";  // guaranteed miss: actuals never end in '*'
          break;
        }
      }
    }
  }

  std::ostringstream out;
  out << "campaign " << c.name << "\n";
  for (const auto& [k, v] : c.params) out << "param " << k << "=" << v << "\n";
  if (opts.long_mode) out << "mode long\n";

  CampaignResult res;
  std::size_t checks = 0;
  for (const Entry& e : p.entries) {
    if (!e.is_check) {
      out << "info " << e.label << "\n";
      continue;
    }
    ++checks;
    bool ok = e.expected == e.actual;
    out << "check " << e.label << " expected " << e.expected << " actual "
        << e.actual << (ok ? " ok" : " MISMATCH") << "\n";
    if (!ok)
      res.mismatches.push_back(e.label + " expected " + e.expected +
                               " actual " + e.actual);
  }
  out << "status " << (res.mismatches.empty() ? "ok" : "mismatch")
      << " checks " << checks << " mismatches " << res.mismatches.size()
      << "\n";
  res.exit_status = res.mismatches.empty() ? 0 : 1;
  res.output_text = out.str();
  write_output(c.output_path, res.output_text);
  return res;
}

}  // namespace

const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names = {
      "thm101-threshold", "thm104-tables", "cor105-tables",
      "cor106-exceptions", "prop503-scan", "prop601-scan", "prop505-check",
      "theta-check", "sa-build", "ca-160", "robin-sa"};
  return names;
}

CampaignResult run_campaign(const Campaign& c, const CampaignOptions& opts) {
  if (opts.sieve_limit) primes::set_default_sieve_limit(opts.sieve_limit);
  Pipeline p;
  if (c.name == "thm101-threshold") {
    run_thm101(c, opts, p);
  } else if (c.name == "thm104-tables" || c.name == "cor105-tables") {
    run_tables(c, opts, p);
  } else if (c.name == "cor106-exceptions") {
    run_cor106(c, opts, p);
  } else if (c.name == "prop503-scan") {
    run_prop503(c, opts, p);
  } else if (c.name == "prop601-scan") {
    run_prop601(c, opts, p);
  } else if (c.name == "prop505-check") {
    run_prop505(c, opts, p);
  } else if (c.name == "theta-check") {
    run_theta(c, opts, p);
  } else if (c.name == "sa-build") {
    run_sa_build(c, opts, p);
  } else if (c.name == "ca-160") {
    run_ca160(c, opts, p);
  } else if (c.name == "robin-sa") {
    run_robin_sa(c, opts, p);
  } else {
    throw std::invalid_argument("unknown campaign: " + c.name);
  }
  return finish(c, opts, p);
}

CampaignResult emit_table(const Campaign& c, TableFormat format,
                          const CampaignOptions& opts) {
  bool known = false;
  for (const auto& n : campaign_names())
    if (n == c.name) known = true;
  if (!known) throw std::invalid_argument("unknown campaign: " + c.name);
  if (opts.sieve_limit) primes::set_default_sieve_limit(opts.sieve_limit);

  std::vector<ComputedRow> rows;
  if (is_table_name(c.name)) rows = table_rows(c.name, opts);

  std::ostringstream out;
  if (format == TableFormat::Tsv) {
    out << "a\tb\tlog10_Nb\tm\tlog10_SAm\tratio\tthreshold\n";
    for (const auto& r : rows)
      out << r.a << '\t' << r.b << '\t' << r.log10_nb << '\t' << r.m << '\t'
          << r.log10_sa << '\t' << r.ratio << '\t' << r.threshold << '\n';
  } else {
    out << "table " << c.name << "\n";
    out << "columns a b log10_Nb m log10_SAm ratio threshold\n";
    for (const auto& r : rows)
      out << "row a=" << r.a << " b=" << r.b << " log10_Nb=" << r.log10_nb
          << " m=" << r.m << " log10_SAm=" << r.log10_sa << " ratio=" << r.ratio
          << " threshold=" << r.threshold << "\n";
  }
  CampaignResult res;
  res.output_text = out.str();
  write_output(c.output_path, res.output_text);
  return res;
}

}  // namespace primlab::campaign
