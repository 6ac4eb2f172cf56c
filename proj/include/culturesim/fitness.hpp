#pragma once

// The two fitness regimes: a closed-form score for single-step actions, and a
// template-matching score summed over the steps of a chained action.

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "culturesim/action.hpp"

namespace culturesim {

/// Terms of the single-step score. Every term is zero for the immobile
/// (all-neutral) action.
struct SingleStepTerms {
  int moving = 0;        // m: body parts not neutral
  int moving_up = 0;     // m_u
  int head_still = 0;    // m_h
  int arms_symmetric = 0;
  int legs_symmetric = 0;
  int arms_up = 0;
  int legs_up = 0;
};

SingleStepTerms single_step_terms(const SubAction& a);

/// F = m + 2 m_u + 10 m_h + 5 (s_a + s_l) + 2 (p_a + p_l).
double fitness_single(const SubAction& a);

inline constexpr double kSingleStepMaximum = 39.0;

/// Phi: 1 iff every specified component of `t` equals the one in `d`.
int template_weight(const Template& t, const SubAction& d);

/// Omega: number of specified (non-wildcard) components.
int template_order(const Template& t);

/// The four fully specified sub-actions that may be chained.
const std::array<SubAction, 4>& acceptable_subactions();

class TemplateSet {
 public:
  explicit TemplateSet(std::vector<Template> templates);

  const std::vector<Template>& templates() const { return templates_; }
  std::size_t size() const { return templates_.size(); }

  /// Precomputed sum of Phi * Omega for `d`.
  double score(const SubAction& d) const { return scores_[d.code()]; }
  /// Precomputed "some template matches `d`".
  bool any_match(const SubAction& d) const { return any_match_[d.code()]; }

 private:
  std::vector<Template> templates_;
  std::array<double, kSubActionCount> scores_{};
  std::array<bool, kSubActionCount> any_match_{};
};

/// Six single-neutral order-1 templates, the ten order-3 "three limbs or head
/// up" templates and the four acceptable sub-actions as order-6 templates.
const TemplateSet& default_template_set();

/// Template data file: a JSON array of compact template strings.
/// Throws std::runtime_error naming the offending entry.
TemplateSet parse_template_json(std::string_view json_text);
TemplateSet load_template_file(const std::filesystem::path& path);
std::string template_set_to_json(const TemplateSet& ts);

/// F(D) = sum_i Phi(T_i, D) * Omega(T_i), evaluated template by template.
double fitness_subaction(const SubAction& d, const TemplateSet& ts);

/// True iff `d` is one of the four acceptable sub-actions.
bool is_successful(const SubAction& d, const TemplateSet& ts);

/// True iff at least one template in the set matches `d`.
bool matches_any_template(const SubAction& d, const TemplateSet& ts);

/// Sum of per-step template fitness.
double fitness_chain(const ActionChain& c, const TemplateSet& ts);

enum class FitnessRegime : std::uint8_t { SingleStep, Template };

/// Evaluates actions under one regime. Single-step scoring reads the first
/// (only) step; template scoring sums over all steps.
class FitnessFunction {
 public:
  explicit FitnessFunction(FitnessRegime regime, const TemplateSet* templates = nullptr);

  FitnessRegime regime() const { return regime_; }
  const TemplateSet* templates() const { return templates_; }

  double step(const SubAction& d) const { return step_scores_[d.code()]; }
  double operator()(const ActionChain& c) const;

 private:
  FitnessRegime regime_;
  const TemplateSet* templates_;
  std::array<double, kSubActionCount> step_scores_{};
};

}  // namespace culturesim
