#pragma once

#include "wdecon/confidence.hpp"
#include "wdecon/estimators.hpp"
#include "wdecon/simulate.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace wdecon {

using json = nlohmann::json;

//! One sample per row, first column; an optional non-numeric header line and
//! blank lines are skipped. Anything else unparsable raises ParseError with
//! its 1-based line number.
std::vector<double> read_samples(const std::string& path);
std::vector<double> read_samples(std::istream& is);

//! x,fhat at 17 significant digits.
void write_estimate_csv(const LinearEstimate& est, const std::string& path);
//! x,lower,center,upper at 17 significant digits.
void write_band_csv(const BandResult& band, const std::string& path);
//! n,level,risk,mc_std_error
void write_risk_csv(const RiskReport& report, const std::string& path);
void write_json(const json& doc, const std::string& path);
json read_json(const std::string& path);

json to_json(const LinearEstimate& est);
json to_json(const BandResult& band);
json to_json(const RiskReport& report);
json to_json(const CoverageReport& report);
json to_json(const RateFit& fit);

TestDensity density_from_json(const json& j);
EstimatorSpec estimator_from_json(const json& j);
BandConfig band_config_from_json(const json& j);
UniformGrid grid_from_json(const json& j);

//! Experiment document: {"experiment": "rates" | "coverage", "density",
//! "error", "estimator" | "band", "ladder" | "n", "n_mc", "seed", "grid",
//! "threads", "target_slope"}.
struct Experiment
{
  std::string kind = "rates";
  RiskConfig risk;
  BandConfig band;
  std::size_t n = 0;
  std::vector<double> z_values; // coverage: extra z values rescored on the same draws
};
Experiment experiment_from_json(const json& j);

} // namespace wdecon
