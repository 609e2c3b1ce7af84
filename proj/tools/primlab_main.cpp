// primlab: certified scans, champion enumeration, and reproducible
// verification campaigns on the command line.

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <gmpxx.h>

#include "primlab/abundant.hpp"
#include "primlab/arithfun.hpp"
#include "primlab/bounds.hpp"
#include "primlab/campaign.hpp"
#include "primlab/primes.hpp"

namespace {

using primlab::campaign::Campaign;
using primlab::campaign::CampaignOptions;
using primlab::campaign::TableFormat;

// Accepts "a/b", a plain integer, or a decimal like "0.00133".
mpq_class parse_rational(const std::string& text) {
  auto bad = [&] {
    throw CLI::ValidationError("expected a rational, got '" + text + "'");
  };
  if (text.empty()) bad();
  std::string s = text;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s = s.substr(1);
    if (s.empty()) bad();
  }
  mpq_class q;
  auto slash = s.find('/');
  auto dot = s.find('.');
  try {
    // base 10 everywhere: the default base 0 would read "00065" as octal
    if (slash != std::string::npos) {
      if (dot != std::string::npos) bad();
      mpz_class num(s.substr(0, slash), 10);
      mpz_class den(s.substr(slash + 1), 10);
      if (den == 0) bad();
      q = mpq_class(num, den);
    } else if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      if (digits.empty()) bad();
      mpz_class num(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
      q = mpq_class(num, den);
    } else {
      q = mpq_class(mpz_class(s, 10), 1);
    }
  } catch (const std::invalid_argument&) {
    bad();
  }
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

void emit(const std::string& text) { std::cout << text; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "primlab: interval-certified scans of divisor-sum and totient bounds.\n"
      "Decimal output is truncated toward zero, never rounded, so printed\n"
      "digits are exact prefixes of the underlying value."};
  app.require_subcommand(1);

  CampaignOptions opts;
  long precision = 128, max_precision = 1024;
  unsigned workers = 1;
  std::uint64_t sieve_limit = 0;
  bool long_mode = false;
  std::string cache_dir = primlab::primes::cache_dir_from_env();

  app.add_option("--precision-bits", precision, "Starting interval precision")
      ->capture_default_str();
  app.add_option("--max-precision-bits", max_precision,
                 "Precision ceiling before a check reports Undecided")
      ->capture_default_str();
  app.add_option("--workers", workers,
                 "Worker count (results are identical for any value)")
      ->capture_default_str();
  app.add_option("--sieve-limit", sieve_limit,
                 "Preallocate the shared sieve to this bound");
  app.add_flag("--long", long_mode,
               "Run full-depth campaigns: the complete 564,397,542-point "
               "totient scan and champion lists past log10 100");
  app.add_option("--cache-dir", cache_dir,
                 "Directory for champion and checkpoint caches "
                 "(default: PRIMLAB_CACHE_DIR)");

  // campaign
  auto* camp = app.add_subcommand("campaign", "Run a named verification "
                                              "campaign and report mismatches");
  std::string camp_name;
  std::vector<std::string> params;
  std::string camp_out;
  int perturb = -1;
  camp->add_option("name", camp_name, "Campaign name (see list-campaigns)")
      ->required();
  camp->add_option("--param", params, "KEY=VALUE campaign parameter")
      ->expected(-1);
  camp->add_option("--out", camp_out, "Also write the report to this file");
  camp->add_option("--perturb", perturb,
                   "Corrupt the i-th embedded expectation; the run must then "
                   "exit nonzero (self-test of the comparison path)");

  auto* list_camp =
      app.add_subcommand("list-campaigns", "Print the campaign catalog");

  // table
  auto* table = app.add_subcommand("table", "Emit a campaign's table rows");
  std::string table_name, table_out, table_fmt = "tsv";
  table->add_option("name", table_name, "Campaign name")->required();
  table->add_option("--format", table_fmt, "tsv or structured-text")
      ->check(CLI::IsMember({"tsv", "structured-text"}))
      ->capture_default_str();
  table->add_option("--out", table_out, "Write the table to this file");

  // sa-list
  auto* sa = app.add_subcommand("sa-list",
                                "Enumerate superabundant records in order");
  double sa_limit = 17.0;
  sa->add_option("--limit-log10", sa_limit, "Upper bound on log10 n")
      ->capture_default_str();

  // ca
  auto* ca = app.add_subcommand(
      "ca", "Colossally abundant number for a parameter, with its window");
  std::string ca_eps;
  ca->add_option("--epsilon", ca_eps, "Parameter as a/b or a decimal")
      ->required();

  // ca-seq
  auto* caseq = app.add_subcommand("ca-seq",
                                   "First entries of the colossally "
                                   "abundant sequence");
  std::uint64_t caseq_count = 20;
  caseq->add_option("--count", caseq_count, "How many entries")
      ->capture_default_str();

  // ben-scan
  auto* ben = app.add_subcommand(
      "ben-scan", "List integers in (lo, hi) whose benefit stays under beta");
  std::string ben_eps, ben_beta, ben_lo, ben_hi, ben_ref;
  ben->add_option("--epsilon", ben_eps, "Benefit parameter")->required();
  ben->add_option("--beta", ben_beta, "Benefit budget")->required();
  ben->add_option("--lo", ben_lo, "Exclusive lower endpoint")->required();
  ben->add_option("--hi", ben_hi, "Exclusive upper endpoint")->required();
  ben->add_option("--ref", ben_ref,
                  "Reference integer (default: the champion for epsilon)");

  // Global flags remain valid after a subcommand name, e.g.
  // `primlab table thm104-tables --long`.
  for (auto* sub : {camp, list_camp, table, sa, ca, caseq, ben})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  opts.precision_bits = precision;
  opts.max_precision_bits = max_precision;
  opts.workers = workers;
  opts.sieve_limit = sieve_limit;
  opts.long_mode = long_mode;
  opts.cache_dir = cache_dir;
  opts.perturb = perturb;

  try {
    if (list_camp->parsed()) {
      for (const auto& n : primlab::campaign::campaign_names())
        std::cout << n << "\n";
      return 0;
    }
    if (camp->parsed()) {
      Campaign c;
      c.name = camp_name;
      c.output_path = camp_out;
      for (const auto& kv : params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
          throw CLI::ValidationError("--param expects KEY=VALUE, got '" + kv +
                                     "'");
        c.params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      auto res = primlab::campaign::run_campaign(c, opts);
      emit(res.output_text);
      return res.exit_status;
    }
    if (table->parsed()) {
      Campaign c;
      c.name = table_name;
      c.output_path = table_out;
      auto fmt = table_fmt == "tsv" ? TableFormat::Tsv
                                    : TableFormat::StructuredText;
      auto res = primlab::campaign::emit_table(c, fmt, opts);
      emit(res.output_text);
      return res.exit_status;
    }
    if (sa->parsed()) {
      auto recs =
          primlab::abundant::enumerate_superabundant(sa_limit, opts.workers);
      for (const auto& r : recs)
        std::cout << r.index << "\t" << r.n.value().get_str() << "\t"
                  << r.n.str() << "\n";
      return 0;
    }
    if (ca->parsed()) {
      auto m = primlab::abundant::ca_number(parse_rational(ca_eps),
                                            opts.precision_bits);
      std::cout << m.n.value().get_str() << "\t" << m.n.str() << "\twindow\t"
                << m.epsilon_lo.get_str() << "\t" << m.epsilon_hi.get_str()
                << "\n";
      return 0;
    }
    if (caseq->parsed()) {
      auto seq = primlab::abundant::ca_sequence(
          caseq_count, std::max<long>(opts.precision_bits, 192));
      for (std::size_t i = 0; i < seq.size(); ++i)
        std::cout << (i + 1) << "\t" << seq[i].n.value().get_str() << "\t"
                  << seq[i].epsilon_lo.get_str() << "\t"
                  << seq[i].epsilon_hi.get_str() << "\n";
      return 0;
    }
    if (ben->parsed()) {
      primlab::abundant::BenefitScanConfig cfg;
      cfg.epsilon = parse_rational(ben_eps);
      cfg.budget = parse_rational(ben_beta);
      cfg.lo = mpz_class(ben_lo, 10);
      cfg.hi = mpz_class(ben_hi, 10);
      if (ben_ref.empty()) {
        cfg.reference =
            primlab::abundant::ca_number(cfg.epsilon, opts.precision_bits);
      } else {
        mpz_class ref(ben_ref, 10);
        if (!ref.fits_ulong_p())
          throw CLI::ValidationError("--ref must fit in 64 bits");
        cfg.reference.n = primlab::arithfun::factorize(ref.get_ui());
        cfg.reference.epsilon_lo = cfg.epsilon;
        cfg.reference.epsilon_hi = cfg.epsilon;
      }
      auto hits = primlab::abundant::benefit_scan(cfg);
      for (const auto& h : hits)
        std::cout << h.value().get_str() << "\t" << h.str() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
