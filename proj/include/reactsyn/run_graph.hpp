#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reactsyn/program.hpp"
#include "reactsyn/two_way_automaton.hpp"
#include "reactsyn/word_automaton.hpp"

namespace reactsyn {

/// Finite graph of joint configurations. `label[v]` is the automaton
/// state of vertex v.
struct RunGraph {
  int initial = 0;
  std::vector<std::vector<int>> succ;
  std::vector<int> label;

  int num_vertices() const { return static_cast<int>(succ.size()); }
};

/// Acceptance condition over automaton states (vertex labels).
struct GraphCondition {
  TreeAcceptance kind = TreeAcceptance::CoBuchi;
  /// F for Buechi and co-Buechi.
  std::vector<bool> marked;
  std::vector<StreettPair> pairs;

  static GraphCondition buchi(std::vector<bool> f);
  static GraphCondition co_buchi(std::vector<bool> f);
  static GraphCondition streett(std::vector<StreettPair> pairs);

  /// Number of basic comparison relations (1, or one per Streett pair).
  int num_relations() const;
  /// The equivalent list of Streett pairs: Buechi F is (all, F) and
  /// co-Buechi F is (F, none).
  std::vector<StreettPair> as_streett(int num_states) const;
};

using Annotation = std::vector<std::uint64_t>;

/// Outcome of comparing the annotations of an edge's endpoints.
enum class Relation { True, Greater, GreaterEqual };

/// Relation required on edges leaving a vertex labelled `state`, for basic
/// relation `index` of the condition.
Relation required_relation(const GraphCondition& cond, int index, int state);
bool relation_holds(Relation rel, std::uint64_t from, std::uint64_t to);

/// Every edge between reachable vertices satisfies the relation and
/// every reachable value is at most `bound`.
bool check_annotation_valid(const RunGraph& g, const GraphCondition& cond, int index, const Annotation& lambda,
                            std::uint64_t bound);

/// Every infinite path from the initial vertex satisfies the condition.
bool graph_satisfies_acceptance(const RunGraph& g, const GraphCondition& cond);

/// One annotation per basic relation, each bounded by |V|, or nullopt if
/// the graph violates the condition.
std::optional<std::vector<Annotation>> construct_streett_annotations(const RunGraph& g, const GraphCondition& cond);

/// Reachable vertex without successors, if any.
std::optional<int> find_reachable_dead_end(const RunGraph& g);

/// Product of a word automaton with a Mealy machine: vertex q * |M| + m.
RunGraph run_graph_word_on_mealy(const WordAutomaton& a, const MealyMachine& m);
inline int word_mealy_vertex(int q, int m, int num_mealy_states) { return q * num_mealy_states + m; }

/// Product of the two-way automaton with a program tree: vertex
/// (p * |T| + t) * 3 + dir. Only edges of reachable vertices are built;
/// macro moves are expanded through the intermediate node.
RunGraph run_graph_twoway_on_tree(const TwoWayAutomaton& a, const ProgramTree& tree);
inline int twoway_vertex(int p, int node, Dir d, int num_nodes) {
  return (p * num_nodes + node) * 3 + static_cast<int>(d);
}

/// Edge-list dump: "v label -> w" lines, preceded by "initial v".
void write_run_graph(const RunGraph& g, std::ostream& out);

}  // namespace reactsyn
