#pragma once

// JSON and CSV encodings of the domain types. Every to_json output is
// accepted by the matching from_json.

#include <string>
#include <vector>

#include <json.hpp>

#include "randinf/core.hpp"
#include "randinf/dense_construct.hpp"
#include "randinf/finite_null.hpp"
#include "randinf/linear_classify.hpp"
#include "randinf/mc_harness.hpp"

namespace randinf::io {

using Json = nlohmann::json;

/// One value per line; blank lines and lines starting with '#' are skipped.
Sample parse_sample_csv(const std::string& text);
Sample read_sample_csv(const std::string& path);

std::string read_file(const std::string& path);
Json read_json(const std::string& path);
Json parse_json(const std::string& text);

Json to_json(const Sample& s);
Sample sample_from_json(const Json& j);

Json to_json(const Alphabet& a);
Alphabet alphabet_from_json(const Json& j);

Json to_json(const DiscreteDistribution& p);
DiscreteDistribution distribution_from_json(const Json& j);

Json to_json(const Transform& g);
Transform transform_from_json(const Json& j);

/// Emits "explicit", "generated" or "sampled".
Json to_json(const GroupSpec& g);
/// Also accepts the named constructors: sign_change, permutation, cyclic,
/// atom_swap, haar, block_rotation.
GroupSpec group_from_json(const Json& j);

Json to_json(const Decision& d);
Decision decision_from_json(const Json& j);

Json to_json(const CountDiff& d);
CountDiff count_diff_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const NullSpec& n);
NullSpec null_from_json(const Json& j);

Json to_json(const finite_null::HypothesisDecision& d, const NullSpec& null, std::size_t n);
/// d, masses, log_ratio, residual, method; vectors joined with ';'.
std::string ledger_csv(std::span<const finite_null::LedgerEntry> ledger);

Eigen::MatrixXd matrix_from_json(const Json& j);
Json to_json(const Eigen::MatrixXd& a);
/// A single matrix (array of rows), an array of matrices, or an object with
/// a "generators" array.
std::vector<Eigen::MatrixXd> matrices_from_json(const Json& j);
/// Comma-separated rows; matrices separated by blank lines.
std::vector<Eigen::MatrixXd> matrices_from_csv(const std::string& text);
Json to_json(const linear_classify::GroupReport& r, std::span<const Eigen::MatrixXd> generators);
Json to_json(const linear_classify::InvarianceReport& r);

Json to_json(const PiecewiseDensity& d);
PiecewiseDensity density_from_json(const Json& j);
Json to_json(const TargetFunctional& t);
TargetFunctional target_from_json(const Json& j);
Json to_json(const MixtureConstruction& c);
Json to_json(const dense_construct::MixtureCheck& c);

Json to_json(const mc::RateEstimate& r);

}  // namespace randinf::io
