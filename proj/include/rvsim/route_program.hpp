#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rvsim/graph.hpp"
#include "rvsim/modified_label.hpp"
#include "rvsim/traj.hpp"

namespace rvsim {

enum class ElemKind : std::uint8_t { None, AtomFirst, AtomSecond, Border, Fence };
const char* elem_kind_name(ElemKind k);

/// Where a move sits inside the rendezvous route: piece k, bit index i, the
/// element being followed and the move offset inside that element.
struct Annotation {
  std::uint64_t piece = 0;
  std::uint32_t bit_index = 0;
  ElemKind kind = ElemKind::None;
  std::uint64_t offset = 0;
};

struct CompletedElement {
  std::uint64_t piece = 0;
  std::uint32_t bit_index = 0;
  ElemKind kind = ElemKind::None;
  std::uint64_t moves = 0;
};

/// Lazy, resumable executor of trajectory terms and of the rendezvous route.
/// A stack of frames materializes only the spine of the current position in
/// the (astronomically long) route. Emitted moves are a pure function of the
/// observation history fed back through arrived(); forward walk frames keep a
/// frame-local entry port that nested detours never disturb, and reversal
/// frames replay recorded entry ports backwards so a reversal retraces its
/// forward twin exactly.
class RouteProgram {
 public:
  /// Program following a single trajectory term, then exhausting.
  /// reverse(T) is supported where it follows its forward twin in a
  /// concatenation (the only place the calculus produces it).
  static RouteProgram for_expr(const TrajExpr& expr,
                               std::shared_ptr<const UxsProvider> provider);

  /// The full rendezvous route for a modified label: pieces k = 1, 2, ...,
  /// per piece the segments for bits 1..min(k,s), borders between them, the
  /// fence after. Never exhausts.
  static RouteProgram rv_algorithm(const ModifiedLabel& label,
                                   std::shared_ptr<const UxsProvider> provider);

  RouteProgram(RouteProgram&&) = default;
  RouteProgram& operator=(RouteProgram&&) = default;
  RouteProgram(const RouteProgram&) = delete;
  RouteProgram& operator=(const RouteProgram&) = delete;

  bool done() const { return stack_.empty(); }

  /// Commits and returns the exit port for the next move; `degree` is the
  /// degree of the node the agent currently occupies.
  std::int32_t next_exit(std::int32_t degree);

  /// Feeds back the entry port observed after the committed move completed.
  void arrived(std::int32_t entry_port);

  /// Annotation of the most recently committed move.
  const Annotation& last_annotation() const { return ann_; }

  /// Elements fully traversed so far; cleared by the call.
  std::vector<CompletedElement> drain_completed_elements() {
    std::vector<CompletedElement> out;
    out.swap(completed_);
    return out;
  }
  bool has_completed_elements() const { return !completed_.empty(); }

  std::uint64_t moves_completed() const { return moves_completed_; }

 private:
  struct MoveRec {
    std::int32_t exit_port;
    std::int32_t entry_port;
  };

  struct BodyRef {
    enum class Type : std::uint8_t { Named, Walk, Interleave, Expr } type = Type::Named;
    TrajForm form = TrajForm::R;  // Named form / Interleave detour form (Q or Z)
    std::uint64_t k = 0;
    const TrajExpr* expr = nullptr;
  };

  struct Frame {
    enum class Kind : std::uint8_t {
      Walk,        // forward R(k) walk driven by the exploration sequence
      Replay,      // reversed replay of recorded moves
      XWalk,       // fused R(k) + reversal (the hot inner form)
      Mirror,      // body then its reversal (Y, A, generic)
      NamedSeq,    // Q(k) = X(1..k), Z(k) = Y(1..k)
      Interleave,  // Y'(k): Q detours along R(k); A'(k): Z detours
      Power,       // closed body repeated `remaining` times (B, K, Omega)
      Concat,      // generic concatenation node
      RvTop        // the algorithm's piece/bit loop
    };
    Kind kind = Kind::Walk;
    std::uint8_t phase = 0;
    TrajForm form = TrajForm::R;
    std::uint64_t k = 0;
    std::uint64_t pos = 0;
    std::int32_t entry_port = 0;
    const std::vector<std::int32_t>* seq = nullptr;
    BigUint remaining;
    std::vector<MoveRec> record;
    BodyRef body;
    const TrajExpr* expr = nullptr;
  };

  RouteProgram(std::shared_ptr<const UxsProvider> provider);

  void push_named(TrajForm f, std::uint64_t k);
  void push_body(const BodyRef& b);
  void push_expr(const TrajExpr* e);
  void pop_frame();
  void set_element(std::uint64_t piece, std::uint32_t bit, ElemKind kind);

  std::vector<MoveRec> acquire_buffer();
  void release_buffer(std::vector<MoveRec>&& buf);

  std::shared_ptr<const UxsProvider> provider_;
  std::unique_ptr<LengthCalculus> calc_;
  std::unique_ptr<TrajExpr> owned_expr_;
  std::vector<std::uint8_t> bits_;
  std::vector<Frame> stack_;
  std::vector<std::vector<MoveRec>> buffer_pool_;
  Annotation ann_;
  std::vector<CompletedElement> completed_;
  std::int32_t pending_exit_ = -1;
  bool move_pending_ = false;
  std::uint64_t moves_completed_ = 0;
  bool rv_mode_ = false;
};

/// The element sequence the algorithm's loop produces for the first
/// `piece_count` pieces: per piece k, for i = 1..min(k,s): two atoms, then a
/// border inside the piece or the fence at its end. `moves` fields are left
/// zero (structure only).
std::vector<CompletedElement> rv_element_plan(const ModifiedLabel& label,
                                              std::uint64_t piece_count);

/// Executes a term against a concrete graph without the engine; used by the
/// length-agreement and closure oracles and by the debug dumper.
struct MaterializeResult {
  std::uint64_t node_count = 0;
  std::int32_t end_node = -1;
  std::vector<std::int32_t> nodes;  // filled only when collect is set
};
MaterializeResult materialize_expr(const TrajExpr& expr,
                                   std::shared_ptr<const UxsProvider> provider,
                                   const PortLabeledGraph& graph, std::int32_t start,
                                   std::uint64_t max_moves, bool collect);

}  // namespace rvsim
