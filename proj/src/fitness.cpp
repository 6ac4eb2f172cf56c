#include "culturesim/fitness.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace culturesim {

SingleStepTerms single_step_terms(const SubAction& a) {
  SingleStepTerms t;
  for (Trit p : a.positions) {
    if (p != 0) ++t.moving;
    if (p > 0) ++t.moving_up;
  }
  if (t.moving == 0) return t;  // immobile: every term is zero

  const Trit la = a[BodyPart::LeftArm], ra = a[BodyPart::RightArm];
  const Trit ll = a[BodyPart::LeftLeg], rl = a[BodyPart::RightLeg];
  t.head_still = a[BodyPart::Head] == 0 ? 1 : 0;
  t.arms_symmetric = (la != 0 && la == ra) ? 1 : 0;
  t.legs_symmetric = (ll != 0 && ll == rl) ? 1 : 0;
  t.arms_up = (la > 0 && ra > 0) ? 1 : 0;
  t.legs_up = (ll > 0 && rl > 0) ? 1 : 0;
  return t;
}

double fitness_single(const SubAction& a) {
  const auto t = single_step_terms(a);
  return t.moving + 2.0 * t.moving_up + 10.0 * t.head_still +
         5.0 * (t.arms_symmetric + t.legs_symmetric) + 2.0 * (t.arms_up + t.legs_up);
}

int template_weight(const Template& t, const SubAction& d) {
  for (std::size_t j = 0; j < kBodyParts; ++j)
    if (t.is_specified(j) && t[j] != d[j]) return 0;
  return 1;
}

int template_order(const Template& t) {
  int n = 0;
  for (std::size_t j = 0; j < kBodyParts; ++j) n += t.is_specified(j) ? 1 : 0;
  return n;
}

const std::array<SubAction, 4>& acceptable_subactions() {
  static const std::array<SubAction, 4> list{
      make_subaction({0, 1, -1, 1, -1, 1}), make_subaction({0, 1, -1, 1, -1, -1}),
      make_subaction({0, -1, 1, -1, 1, 1}), make_subaction({0, -1, 1, -1, 1, -1})};
  return list;
}

TemplateSet::TemplateSet(std::vector<Template> templates) : templates_(std::move(templates)) {
  if (templates_.empty()) throw std::invalid_argument("template set is empty");
  for (std::size_t c = 0; c < kSubActionCount; ++c) {
    const auto d = SubAction::from_code(static_cast<std::uint16_t>(c));
    scores_[c] = fitness_subaction(d, *this);
    bool any = false;
    for (const auto& t : templates_) any = any || template_weight(t, d) == 1;
    any_match_[c] = any;
  }
}

const TemplateSet& default_template_set() {
  static const TemplateSet set = [] {
    std::vector<Template> ts;
    // one order-1 template per body part, requiring it to be neutral
    for (std::size_t j = 0; j < kBodyParts; ++j) {
      std::array<std::int8_t, kBodyParts> c;
      c.fill(Template::kWildcard);
      c[j] = 0;
      ts.emplace_back(c);
    }
    // three of HD, LA, RA, LL, RL up
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = a + 1; b < 5; ++b)
        for (std::size_t e = b + 1; e < 5; ++e) {
          std::array<std::int8_t, kBodyParts> c;
          c.fill(Template::kWildcard);
          c[a] = c[b] = c[e] = 1;
          ts.emplace_back(c);
        }
    for (const auto& s : acceptable_subactions()) ts.emplace_back(s.positions);
    return TemplateSet(std::move(ts));
  }();
  return set;
}

TemplateSet parse_template_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("template file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw std::runtime_error("template file must be a JSON array of strings");
  std::vector<Template> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_string())
      throw std::runtime_error("template entry " + std::to_string(i) + " is not a string");
    const auto text = doc[i].get<std::string>();
    try {
      out.push_back(parse_template(text));
    } catch (const std::exception& e) {
      throw std::runtime_error("template entry " + std::to_string(i) + " (\"" + text +
                               "\"): " + e.what());
    }
  }
  if (out.empty()) throw std::runtime_error("template file contains no templates");
  return TemplateSet(std::move(out));
}

TemplateSet load_template_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open template file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_template_json(buf.str());
}

std::string template_set_to_json(const TemplateSet& ts) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& t : ts.templates()) doc.push_back(format_template(t));
  return doc.dump(2);
}

double fitness_subaction(const SubAction& d, const TemplateSet& ts) {
  double f = 0.0;
  for (const auto& t : ts.templates()) f += template_weight(t, d) * template_order(t);
  return f;
}

bool is_successful(const SubAction& d, const TemplateSet&) {
  for (const auto& s : acceptable_subactions())
    if (s == d) return true;
  return false;
}

bool matches_any_template(const SubAction& d, const TemplateSet& ts) { return ts.any_match(d); }

double fitness_chain(const ActionChain& c, const TemplateSet& ts) {
  double f = 0.0;
  for (const auto& s : c.steps()) f += ts.score(s);
  return f;
}

FitnessFunction::FitnessFunction(FitnessRegime regime, const TemplateSet* templates)
    : regime_(regime), templates_(templates) {
  if (regime_ == FitnessRegime::Template && templates_ == nullptr)
    throw std::invalid_argument("template regime needs a template set");
  for (std::size_t c = 0; c < kSubActionCount; ++c) {
    const auto d = SubAction::from_code(static_cast<std::uint16_t>(c));
    step_scores_[c] = regime_ == FitnessRegime::SingleStep ? fitness_single(d) : templates_->score(d);
  }
}

double FitnessFunction::operator()(const ActionChain& c) const {
  if (regime_ == FitnessRegime::SingleStep) return step_scores_[c.front().code()];
  double f = 0.0;
  for (const auto& s : c.steps()) f += step_scores_[s.code()];
  return f;
}

}  // namespace culturesim
