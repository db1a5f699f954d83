#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfjss/criteria.hpp"
#include "pfjss/mcdm.hpp"

namespace pfjss {

enum class RuleId { C1, C2, C3, C4, C5, C6, C7, C8, C9, C10, C11, C12, SPT, EDD, FIFO };

enum class McdmMethod { Topsis, Cp, Edas, Promethee };

struct McdmOptions {
  CriteriaWeights weights;
  double cp_p = 2.0;
  EdasAppraisal edas = EdasAppraisal::Standard;
  std::vector<PreferenceFunction> preferences;  // empty: usual criterion
};

// Table of standard fuzzy weights for the five job criteria, all costs.
CriteriaWeights default_weights();
McdmOptions default_mcdm_options();

struct RuleSpec {
  RuleId id = RuleId::C1;
  McdmOptions mcdm = default_mcdm_options();  // read by C9..C12 only
  // Flow-due-date allowance factor; unset means (D - AT) / Pt per job.
  std::optional<double> fdd_allowance;

  bool is_mcdm() const;
  bool is_composite() const;
  McdmMethod method() const;  // C9..C12 only
  std::string name() const;
};

std::string_view rule_name(RuleId id);
std::string_view rule_formula(RuleId id);
std::optional<RuleId> rule_from_name(std::string_view s);
std::vector<RuleId> all_rules();      // C1..C12, SPT, EDD, FIFO
std::vector<RuleId> study_rules();    // C1..C12
RuleSpec make_rule(RuleId id, McdmOptions opts = default_mcdm_options());

struct PrimitiveValues {
  double pt = 0;     // imminent operation time on this machine
  double spt = 0;
  double lwr = 0;    // remaining work including the imminent operation
  double ltwc = 0;   // total work content
  double lnop = 0;   // total operation count
  double lrnop = 0;  // remaining operation count
  double lrwc = 0;
  double at = 0;
  double edd = 0;
  double slack = 0;
  double fdd = 0;
  double odd = 0;
  double rt = 0;     // remaining work after the imminent operation
  double fifo = 0;   // queue entry time
};

PrimitiveValues primitives(const JobState& state, Time imminent_ptime, Time now,
                           std::optional<double> fdd_allowance = std::nullopt);

struct CdrValue {
  double index = 0;
  bool ratio_zeroed = false;  // C8 with LRWC == LTWC
};

// Smaller index is served first. Throws for MCDM rule ids.
CdrValue evaluate_cdr(RuleId id, const PrimitiveValues& p);
double cdr_priority(const RuleSpec& spec, const PrimitiveValues& p);

Ranking mcdm_priority(const RuleSpec& spec, std::span<const JobState> queue, Time now);

/// Ranks a machine queue under any registered rule; rank 1 is served next.
/// `imminent_ptimes[i]` is queue[i]'s processing time on this machine.
Ranking prioritize(const RuleSpec& spec, std::span<const JobState> queue,
                   std::span<const Time> imminent_ptimes, Time now);

}  // namespace pfjss
