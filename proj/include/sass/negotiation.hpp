#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sass/comms.hpp"

namespace sass {

enum class Phase { Selection, Formation, Routing };

std::string_view phase_name(Phase phase);

struct Proposal {
  Phase phase = Phase::Selection;
  RobotId proposer = 0;
  std::string payload;  // canonical form of the plan
  int criterion_depth = 0;
};

enum class AgreementOutcome { End, Conflict };

class PhaseMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// End when every gathered proposal carries the same payload as the first one.
AgreementOutcome agreement(const std::vector<Proposal>& proposals);

// Computes one member's proposal from what that member knows.
using Planner =
    std::function<std::string(RobotId member, const KnowledgeSet& knowledge, int criterion_depth)>;

struct NegotiationRecord {
  Phase phase = Phase::Selection;
  std::string payload;         // the agreed plan
  int iterations = 0;
  int final_depth = 0;
  std::vector<int> dcm_rounds; // one entry per gossip of proposals
  std::set<RobotId> participants;

  int total_rounds() const;
};

struct NegotiationOptions {
  int start_depth = 0;
  // First depth that no longer exists in the needs order.
  int depth_limit = 1;
  // Robots that forward messages in addition to the group. Empty means the
  // group gossips over its own induced subgraph.
  std::set<RobotId> relays;
};

// Plan -> gossip -> agree loop. Each member proposes from its own knowledge at
// the current criterion depth, proposals are spread to equilibrium together with
// the members' knowledge, and agreement is checked over the gathered set. A
// conflict caused by members knowing different things is replanned at the same
// depth with the merged knowledge; a conflict between members that already knew
// the same things escalates to the next criterion. Throws ExhaustedCriteria once
// the depth limit is reached. knowledge is updated in place.
NegotiationRecord negotiate(Phase phase, const std::set<RobotId>& group, const CommGraph& graph,
                            std::map<RobotId, KnowledgeSet>& knowledge, const Planner& planner,
                            const NegotiationOptions& options);

}  // namespace sass
