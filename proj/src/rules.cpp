#include "pfjss/rules.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "pfjss/text.hpp"

namespace pfjss {

CriteriaWeights default_weights() {
  const std::array<FuzzyTriple, 5> fuzzy{{{0.07, 0.10, 0.16},
                                          {0.17, 0.26, 0.43},
                                          {0.09, 0.15, 0.23},
                                          {0.03, 0.04, 0.06},
                                          {0.25, 0.46, 0.77}}};
  return defuzzify_weights(fuzzy);
}

McdmOptions default_mcdm_options() {
  McdmOptions o;
  o.weights = default_weights();
  return o;
}

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
  std::string_view formula;
};

constexpr std::array<RuleInfo, 15> kRules{{
    {RuleId::C1, "C1", "2PT + LWR + FDD"},
    {RuleId::C2, "C2", "2PT + LWR + Slack"},
    {RuleId::C3, "C3", "SPT + LWR + Slack"},
    {RuleId::C4, "C4", "2PT + LWR + EDD"},
    {RuleId::C5, "C5", "7*LTWC + 11*SPT + 12*(LNOP + AT)"},
    {RuleId::C6, "C6", "LTWC / (3 + LNOP - LRNOP)"},
    {RuleId::C7, "C7", "ODD + RT"},
    {RuleId::C8, "C8", "[EDD + ((LRNOP + LTWC)/(LRWC - LTWC))*LNOP] * LRNOP"},
    {RuleId::C9, "C9", "FAHP weights + TOPSIS"},
    {RuleId::C10, "C10", "FAHP weights + CP"},
    {RuleId::C11, "C11", "FAHP weights + EDAS"},
    {RuleId::C12, "C12", "FAHP weights + PROMETHEE II"},
    {RuleId::SPT, "SPT", "shortest imminent processing time"},
    {RuleId::EDD, "EDD", "earliest due date"},
    {RuleId::FIFO, "FIFO", "first in queue"},
}};

const RuleInfo& info(RuleId id) {
  for (const auto& r : kRules)
    if (r.id == id) return r;
  throw std::invalid_argument("unregistered rule");
}

}  // namespace

std::string_view rule_name(RuleId id) { return info(id).name; }
std::string_view rule_formula(RuleId id) { return info(id).formula; }

std::optional<RuleId> rule_from_name(std::string_view s) {
  auto upper = std::string(trim(s));
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& r : kRules)
    if (r.name == upper) return r.id;
  return std::nullopt;
}

std::vector<RuleId> all_rules() {
  std::vector<RuleId> out;
  for (const auto& r : kRules) out.push_back(r.id);
  return out;
}

std::vector<RuleId> study_rules() {
  auto out = all_rules();
  out.resize(12);
  return out;
}

bool RuleSpec::is_mcdm() const {
  return id == RuleId::C9 || id == RuleId::C10 || id == RuleId::C11 || id == RuleId::C12;
}

bool RuleSpec::is_composite() const {
  return !is_mcdm() && id != RuleId::SPT && id != RuleId::EDD && id != RuleId::FIFO;
}

McdmMethod RuleSpec::method() const {
  switch (id) {
    case RuleId::C9: return McdmMethod::Topsis;
    case RuleId::C10: return McdmMethod::Cp;
    case RuleId::C11: return McdmMethod::Edas;
    case RuleId::C12: return McdmMethod::Promethee;
    default: throw std::logic_error(std::string(rule_name(id)) + " is not an MCDM rule");
  }
}

std::string RuleSpec::name() const { return std::string(rule_name(id)); }

RuleSpec make_rule(RuleId id, McdmOptions opts) {
  RuleSpec r;
  r.id = id;
  r.mcdm = std::move(opts);
  return r;
}

PrimitiveValues primitives(const JobState& s, Time imminent_ptime, Time now,
                           std::optional<double> fdd_allowance) {
  if (s.completed || s.remaining_ops <= 0)
    throw std::invalid_argument("primitives: job " + std::to_string(s.job_id) + " is completed");
  PrimitiveValues p;
  p.pt = imminent_ptime;
  p.spt = imminent_ptime;
  p.rt = std::max(0.0, s.remaining_work - s.next_op_estimate);
  p.lwr = p.pt + p.rt;
  p.lrwc = p.lwr;
  p.ltwc = s.total_work;
  p.lnop = s.total_ops;
  p.lrnop = s.remaining_ops;
  p.at = s.arrival_time;
  p.edd = s.due_date;
  p.slack = s.due_date - now - p.lwr;
  double cf = fdd_allowance ? *fdd_allowance
                            : (s.total_work > 0 ? (s.due_date - s.arrival_time) / s.total_work : 0);
  p.fdd = s.arrival_time + cf * s.total_work;
  double k = s.next_op + 1;
  p.odd = s.arrival_time + (k / s.total_ops) * (s.due_date - s.arrival_time);
  p.fifo = s.queue_entry_time;
  return p;
}

CdrValue evaluate_cdr(RuleId id, const PrimitiveValues& p) {
  switch (id) {
    case RuleId::C1: return {2 * p.pt + p.lwr + p.fdd};
    case RuleId::C2: return {2 * p.pt + p.lwr + p.slack};
    case RuleId::C3: return {p.spt + p.lwr + p.slack};
    case RuleId::C4: return {2 * p.pt + p.lwr + p.edd};
    case RuleId::C5: return {7 * p.ltwc + 11 * p.spt + 12 * (p.lnop + p.at)};
    case RuleId::C6: return {p.ltwc / (3 + p.lnop - p.lrnop)};
    case RuleId::C7: return {p.odd + p.rt};
    case RuleId::C8: {
      double denom = p.lrwc - p.ltwc;
      bool singular = std::abs(denom) <= 1e-12 * std::max(1.0, std::abs(p.ltwc));
      double ratio = singular ? 0.0 : (p.lrnop + p.ltwc) / denom;
      return {(p.edd + ratio * p.lnop) * p.lrnop, singular};
    }
    case RuleId::SPT: return {p.spt};
    case RuleId::EDD: return {p.edd};
    case RuleId::FIFO: return {p.fifo};
    default:
      throw std::invalid_argument(std::string(rule_name(id)) + " has no priority index formula");
  }
}

double cdr_priority(const RuleSpec& spec, const PrimitiveValues& p) {
  return evaluate_cdr(spec.id, p).index;
}

Ranking mcdm_priority(const RuleSpec& spec, std::span<const JobState> queue, Time now) {
  if (queue.empty()) throw std::invalid_argument("mcdm_priority: empty queue");
  auto method = spec.method();
  if (queue.size() == 1) {
    Ranking r;
    r.method = spec.name();
    r.entries.push_back({queue[0].job_id, 0.0, 1});
    return r;
  }
  auto m = build_decision_matrix(queue, now, spec.mcdm.weights);
  Ranking r;
  switch (method) {
    case McdmMethod::Topsis: r = topsis_rank(m).first; break;
    case McdmMethod::Cp: r = cp_rank(m, spec.mcdm.cp_p).first; break;
    case McdmMethod::Edas: r = edas_rank(m, spec.mcdm.edas).first; break;
    case McdmMethod::Promethee: r = promethee_rank(m, spec.mcdm.preferences).first; break;
  }
  return r;
}

Ranking prioritize(const RuleSpec& spec, std::span<const JobState> queue,
                   std::span<const Time> imminent_ptimes, Time now) {
  if (queue.size() != imminent_ptimes.size())
    throw std::invalid_argument("prioritize: ptime count does not match queue");
  if (spec.is_mcdm()) return mcdm_priority(spec, queue, now);
  std::vector<std::pair<JobId, double>> scores;
  bool flagged = false;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto v = evaluate_cdr(spec.id, primitives(queue[i], imminent_ptimes[i], now, spec.fdd_allowance));
    flagged = flagged || v.ratio_zeroed;
    scores.emplace_back(queue[i].job_id, v.index);
  }
  auto r = rank_from_scores(scores, Orientation::Ascending, spec.name());
  if (flagged) r.notes.push_back("C8 ratio term zeroed for a job with no work done yet");
  return r;
}

}  // namespace pfjss
