#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "calab/configuration.hpp"

namespace calab {

inline constexpr const char* kCodeVersion = "calab 0.1.0";

// Monte Carlo result. For indicator estimators std_error is
// sqrt(value * (1 - value) / samples), scaled when the estimator multiplies
// by an exact probability.
struct EstimateReport {
  std::string method;
  std::string automaton;
  std::string measure;
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
  long horizon = 0;
  Interval window;
  std::uint64_t seed = 0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

double bernoulli_stderr(double p, long n);
// sqrt(a^2 + b^2)
double pooled(double a, double b);

// FNV-1a over the compact dump of `config`, as 16 hex digits.
std::string config_digest(const nlohmann::json& config);

}  // namespace calab
