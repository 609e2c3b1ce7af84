#pragma once

#include <mpfr.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace primlab::campaign {

// A named verification pipeline over the other modules.  Each name wires a
// fixed computation to a fixed set of recorded expectations; params tune
// ranges where a campaign accepts them and are validated per campaign.
struct Campaign {
  std::string name;
  std::map<std::string, std::string> params;
  std::string output_path;  // empty: report returned but not written
};

struct CampaignOptions {
  mpfr_prec_t precision_bits = 128;
  mpfr_prec_t max_precision_bits = 1024;
  unsigned workers = 1;
  std::uint64_t sieve_limit = 0;  // 0 keeps the library default
  bool long_mode = false;         // unlocks the long-running variants
  std::string cache_dir;          // champion-record cache location, may be empty
  // Seeded fault injection: when >= 0, the (perturb mod #checks)-th embedded
  // expectation is corrupted before comparison, so the run must exit nonzero.
  int perturb = -1;
};

struct CampaignResult {
  int exit_status = 0;          // 0 iff every embedded expectation matched
  std::vector<std::string> mismatches;  // one stable-format line per miss
  std::string output_text;      // deterministic report (also written to file)
};

// The fixed campaign catalog, in canonical order.
const std::vector<std::string>& campaign_names();

// Runs one campaign, compares every computed value against the recorded
// expectations, writes the report to c.output_path when set, and returns it.
// Unknown names and invalid params throw std::invalid_argument; campaigns
// gated behind long mode throw when run without it.
CampaignResult run_campaign(const Campaign& c, const CampaignOptions& opts = {});

enum class TableFormat { Tsv, StructuredText };

// Renders the row view of a table campaign (thm104-tables, cor105-tables)
// with columns a, b, log10_Nb, m, log10_SAm, ratio, threshold, decimals
// truncated to 6 places.  Campaigns without rows produce a header-only
// file.  Writes to c.output_path when set.
CampaignResult emit_table(const Campaign& c, TableFormat format,
                          const CampaignOptions& opts = {});

}  // namespace primlab::campaign
