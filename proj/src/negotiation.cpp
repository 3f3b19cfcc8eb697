#include "sass/negotiation.hpp"

#include <numeric>

#include "sass/needs.hpp"

namespace sass {

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::Selection:
      return "selection";
    case Phase::Formation:
      return "formation";
    case Phase::Routing:
      return "routing";
  }
  return "unknown";
}

AgreementOutcome agreement(const std::vector<Proposal>& proposals) {
  if (proposals.empty()) throw std::invalid_argument("agreement: no proposals");
  int count = 1;
  const auto& first = proposals.front();
  for (const auto& item : proposals) {
    if (item.phase != first.phase) {
      throw PhaseMismatch("agreement: proposals from different phases");
    }
    if (item.payload != first.payload) ++count;
  }
  return count == 1 ? AgreementOutcome::End : AgreementOutcome::Conflict;
}

int NegotiationRecord::total_rounds() const {
  return std::accumulate(dcm_rounds.begin(), dcm_rounds.end(), 0);
}

namespace {

std::string proposal_kind(Phase phase) {
  return "proposal/" + std::string(phase_name(phase));
}

}  // namespace

NegotiationRecord negotiate(Phase phase, const std::set<RobotId>& group, const CommGraph& graph,
                            std::map<RobotId, KnowledgeSet>& knowledge, const Planner& planner,
                            const NegotiationOptions& options) {
  if (group.empty()) throw std::invalid_argument("negotiate: empty group");

  NegotiationRecord record;
  record.phase = phase;
  record.participants = group;
  record.participants.insert(options.relays.begin(), options.relays.end());

  const std::string kind = proposal_kind(phase);
  int depth = options.start_depth;

  while (true) {
    if (depth >= options.depth_limit) {
      throw ExhaustedCriteria("negotiate: conflict persists past the last criterion");
    }
    ++record.iterations;

    std::map<RobotId, KnowledgeSet> outgoing;
    for (RobotId p : record.participants) {
      KnowledgeSet ks = knowledge[p];
      ks.owner = p;
      if (group.contains(p)) {
        ks.items.insert(Datagram{p, kind, planner(p, knowledge[p], depth)});
      }
      outgoing[p] = std::move(ks);
    }

    auto spread = dcm(outgoing, graph, record.participants);
    record.dcm_rounds.push_back(spread.rounds);

    bool knowledge_grew = false;
    for (RobotId p : record.participants) {
      KnowledgeSet learned;
      learned.owner = p;
      for (const auto& d : spread.equilibrium.at(p).items) {
        if (d.kind != kind) learned.items.insert(d);
      }
      if (!(learned == knowledge[p])) knowledge_grew = true;
      knowledge[p] = std::move(learned);
    }

    // Every participant holds the same set after dcm, so one evaluation stands
    // for all of them.
    std::vector<Proposal> gathered;
    for (const auto& d : spread.equilibrium.at(*group.begin()).items) {
      if (d.kind == kind) gathered.push_back(Proposal{phase, d.origin, d.payload, depth});
    }
    if (agreement(gathered) == AgreementOutcome::End) {
      record.payload = gathered.front().payload;
      record.final_depth = depth;
      return record;
    }
    if (!knowledge_grew) ++depth;
  }
}

}  // namespace sass
