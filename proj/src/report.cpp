#include "primlab/report.hpp"

#include <sstream>

namespace primlab::bounds {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AllHold:
      return "AllHold";
    case Verdict::FailuresAt:
      return "FailuresAt";
    case Verdict::ThresholdFound:
      return "ThresholdFound";
  }
  return "?";
}

std::string VerificationReport::to_json(bool normalize_runtime) const {
  std::ostringstream out;
  out << "{\"inequality\":\"" << inequality << "\""
      << ",\"range\":[" << lo.get_str() << "," << hi.get_str() << "]"
      << ",\"verdict\":\"" << verdict_name(verdict) << "\"";
  out << ",\"failures\":[";
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (i) out << ",";
    out << failures[i].get_str();
  }
  out << "]";
  out << ",\"threshold\":";
  if (verdict == Verdict::ThresholdFound) {
    out << threshold.get_str();
  } else {
    out << "null";
  }
  out << ",\"precision_bits\":" << precision_used;
  out << ",\"runtime_s\":";
  if (normalize_runtime) {
    out << "\"-\"";
  } else {
    out << runtime_s;
  }
  out << "}";
  return out.str();
}

}  // namespace primlab::bounds
