#include "calab/report.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <sstream>

namespace calab {

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["method"] = method;
  j["automaton"] = automaton;
  j["measure"] = measure;
  j["value"] = value;
  j["stderr"] = std_error;
  j["samples"] = samples;
  j["horizon"] = horizon;
  j["window"] = {window.lo, window.hi};
  j["seed"] = seed;
  j["code_version"] = kCodeVersion;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

std::string EstimateReport::csv_header() {
  return "method,automaton,measure,value,stderr,samples,horizon,window_lo,window_hi,seed";
}

std::string EstimateReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << method << ',' << automaton << ',' << measure << ',' << value << ',' << std_error << ','
     << samples << ',' << horizon << ',' << window.lo << ',' << window.hi << ',' << seed;
  return os.str();
}

double bernoulli_stderr(double p, long n) {
  if (n <= 0) return 0.0;
  double q = std::clamp(p, 0.0, 1.0);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(n));
}

double pooled(double a, double b) { return std::sqrt(a * a + b * b); }

std::string config_digest(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace calab
