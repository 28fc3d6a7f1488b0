#include "rvsim/route_program.hpp"

#include <algorithm>
#include <stdexcept>

namespace rvsim {

const char* elem_kind_name(ElemKind k) {
  switch (k) {
    case ElemKind::None: return "none";
    case ElemKind::AtomFirst: return "atom-first";
    case ElemKind::AtomSecond: return "atom-second";
    case ElemKind::Border: return "border";
    case ElemKind::Fence: return "fence";
  }
  return "?";
}

namespace {

bool expr_equal(const TrajExpr& a, const TrajExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TrajExpr::Kind::Named:
      return a.form == b.form && a.k == b.k;
    case TrajExpr::Kind::Reverse:
      return expr_equal(a.children[0], b.children[0]);
    case TrajExpr::Kind::Concat: {
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!expr_equal(a.children[i], b.children[i])) return false;
      return true;
    }
    case TrajExpr::Kind::Power:
      return a.exponent == b.exponent && expr_equal(a.children[0], b.children[0]);
  }
  return false;
}

}  // namespace

RouteProgram::RouteProgram(std::shared_ptr<const UxsProvider> provider)
    : provider_(std::move(provider)),
      calc_(std::make_unique<LengthCalculus>(provider_)) {}

RouteProgram RouteProgram::for_expr(const TrajExpr& expr,
                                    std::shared_ptr<const UxsProvider> provider) {
  RouteProgram prog(std::move(provider));
  prog.owned_expr_ = std::make_unique<TrajExpr>(expr);
  prog.push_expr(prog.owned_expr_.get());
  return prog;
}

RouteProgram RouteProgram::rv_algorithm(const ModifiedLabel& label,
                                        std::shared_ptr<const UxsProvider> provider) {
  RouteProgram prog(std::move(provider));
  prog.bits_ = label.bits;
  prog.rv_mode_ = true;
  Frame top;
  top.kind = Frame::Kind::RvTop;
  top.k = 1;    // piece
  top.pos = 1;  // bit index i
  top.phase = 0;
  prog.stack_.push_back(std::move(top));
  return prog;
}

std::vector<RouteProgram::MoveRec> RouteProgram::acquire_buffer() {
  if (buffer_pool_.empty()) return {};
  std::vector<MoveRec> buf = std::move(buffer_pool_.back());
  buffer_pool_.pop_back();
  buf.clear();
  return buf;
}

void RouteProgram::release_buffer(std::vector<MoveRec>&& buf) {
  if (buffer_pool_.size() < 8) buffer_pool_.push_back(std::move(buf));
}

void RouteProgram::push_named(TrajForm f, std::uint64_t k) {
  Frame fr;
  switch (f) {
    case TrajForm::R:
      fr.kind = Frame::Kind::Walk;
      fr.k = k;
      fr.seq = &provider_->sequence(k);
      break;
    case TrajForm::X:
      fr.kind = Frame::Kind::XWalk;
      fr.k = k;
      fr.seq = &provider_->sequence(k);
      fr.record = acquire_buffer();
      break;
    case TrajForm::Q:
      fr.kind = Frame::Kind::NamedSeq;
      fr.form = TrajForm::Q;
      fr.k = k;
      fr.pos = 1;
      break;
    case TrajForm::Y:
      fr.kind = Frame::Kind::Mirror;
      fr.body = BodyRef{BodyRef::Type::Interleave, TrajForm::Q, k, nullptr};
      fr.record = acquire_buffer();
      break;
    case TrajForm::Z:
      fr.kind = Frame::Kind::NamedSeq;
      fr.form = TrajForm::Z;
      fr.k = k;
      fr.pos = 1;
      break;
    case TrajForm::A:
      fr.kind = Frame::Kind::Mirror;
      fr.body = BodyRef{BodyRef::Type::Interleave, TrajForm::Z, k, nullptr};
      fr.record = acquire_buffer();
      break;
    case TrajForm::B:
      fr.kind = Frame::Kind::Power;
      fr.body = BodyRef{BodyRef::Type::Named, TrajForm::Y, k, nullptr};
      fr.remaining = calc_->power_exponent(TrajForm::B, k);
      break;
    case TrajForm::K:
      fr.kind = Frame::Kind::Power;
      fr.body = BodyRef{BodyRef::Type::Named, TrajForm::X, k, nullptr};
      fr.remaining = calc_->power_exponent(TrajForm::K, k);
      break;
    case TrajForm::Omega:
      fr.kind = Frame::Kind::Power;
      fr.body = BodyRef{BodyRef::Type::Named, TrajForm::X, k, nullptr};
      fr.remaining = calc_->power_exponent(TrajForm::Omega, k);
      break;
  }
  stack_.push_back(std::move(fr));
}

void RouteProgram::push_body(const BodyRef& b) {
  switch (b.type) {
    case BodyRef::Type::Named:
      push_named(b.form, b.k);
      return;
    case BodyRef::Type::Walk: {
      Frame fr;
      fr.kind = Frame::Kind::Walk;
      fr.k = b.k;
      fr.seq = &provider_->sequence(b.k);
      stack_.push_back(std::move(fr));
      return;
    }
    case BodyRef::Type::Interleave: {
      Frame fr;
      fr.kind = Frame::Kind::Interleave;
      fr.form = b.form;  // detour form: Q or Z
      fr.k = b.k;
      fr.seq = &provider_->sequence(b.k);
      fr.phase = 0;
      stack_.push_back(std::move(fr));
      return;
    }
    case BodyRef::Type::Expr:
      push_expr(b.expr);
      return;
  }
}

void RouteProgram::push_expr(const TrajExpr* e) {
  switch (e->kind) {
    case TrajExpr::Kind::Named:
      push_named(e->form, e->k);
      return;
    case TrajExpr::Kind::Concat: {
      Frame fr;
      fr.kind = Frame::Kind::Concat;
      fr.expr = e;
      fr.pos = 0;
      stack_.push_back(std::move(fr));
      return;
    }
    case TrajExpr::Kind::Power: {
      Frame fr;
      fr.kind = Frame::Kind::Power;
      fr.body = BodyRef{BodyRef::Type::Expr, TrajForm::R, 0, &e->children[0]};
      fr.remaining = e->exponent;
      stack_.push_back(std::move(fr));
      return;
    }
    case TrajExpr::Kind::Reverse:
      throw std::invalid_argument(
          "reversal is executable only after its forward twin in a concatenation");
  }
}

void RouteProgram::set_element(std::uint64_t piece, std::uint32_t bit, ElemKind kind) {
  ann_.piece = piece;
  ann_.bit_index = bit;
  ann_.kind = kind;
  ann_.offset = 0;
}

void RouteProgram::pop_frame() {
  Frame done = std::move(stack_.back());
  stack_.pop_back();
  if (done.kind == Frame::Kind::Replay || done.kind == Frame::Kind::Mirror ||
      done.kind == Frame::Kind::XWalk)
    release_buffer(std::move(done.record));
  if (rv_mode_ && !stack_.empty() && stack_.back().kind == Frame::Kind::RvTop) {
    completed_.push_back(
        CompletedElement{ann_.piece, ann_.bit_index, ann_.kind, ann_.offset});
  }
}

std::int32_t RouteProgram::next_exit(std::int32_t degree) {
  if (move_pending_) throw std::logic_error("next_exit called with a move pending");
  for (;;) {
    if (stack_.empty()) throw std::logic_error("route program exhausted");
    Frame& f = stack_.back();
    switch (f.kind) {
      case Frame::Kind::Walk: {
        if (f.pos >= f.seq->size()) {
          pop_frame();
          continue;
        }
        std::int32_t inc = (*f.seq)[f.pos];
        std::int32_t exit =
            static_cast<std::int32_t>((f.entry_port + static_cast<std::int64_t>(inc)) %
                                      degree);
        pending_exit_ = exit;
        move_pending_ = true;
        return exit;
      }
      case Frame::Kind::Replay: {
        if (f.pos == 0) {
          pop_frame();
          continue;
        }
        std::int32_t exit = f.record[f.pos - 1].entry_port;
        pending_exit_ = exit;
        move_pending_ = true;
        return exit;
      }
      case Frame::Kind::XWalk: {
        if (f.phase == 0) {
          if (f.pos < f.seq->size()) {
            std::int32_t inc = (*f.seq)[f.pos];
            std::int32_t exit = static_cast<std::int32_t>(
                (f.entry_port + static_cast<std::int64_t>(inc)) % degree);
            pending_exit_ = exit;
            move_pending_ = true;
            return exit;
          }
          f.phase = 1;
          f.pos = f.record.size();
          continue;
        }
        if (f.pos == 0) {
          pop_frame();
          continue;
        }
        std::int32_t exit = f.record[f.pos - 1].entry_port;
        pending_exit_ = exit;
        move_pending_ = true;
        return exit;
      }
      case Frame::Kind::Mirror: {
        if (f.phase == 0) {
          f.phase = 1;
          BodyRef body = f.body;
          push_body(body);  // invalidates f
          continue;
        }
        if (f.phase == 1) {
          f.phase = 2;
          Frame rep;
          rep.kind = Frame::Kind::Replay;
          rep.record = std::move(f.record);
          rep.pos = rep.record.size();
          stack_.push_back(std::move(rep));  // invalidates f
          continue;
        }
        pop_frame();
        continue;
      }
      case Frame::Kind::NamedSeq: {
        if (f.pos > f.k) {
          pop_frame();
          continue;
        }
        std::uint64_t i = f.pos++;
        TrajForm child = f.form == TrajForm::Q ? TrajForm::X : TrajForm::Y;
        push_named(child, i);  // invalidates f
        continue;
      }
      case Frame::Kind::Interleave: {
        if (f.phase == 0) {
          f.phase = 1;
          TrajForm detour = f.form;
          std::uint64_t kk = f.k;
          push_named(detour, kk);  // invalidates f
          continue;
        }
        if (f.pos >= f.seq->size()) {
          pop_frame();
          continue;
        }
        std::int32_t inc = (*f.seq)[f.pos];
        std::int32_t exit =
            static_cast<std::int32_t>((f.entry_port + static_cast<std::int64_t>(inc)) %
                                      degree);
        pending_exit_ = exit;
        move_pending_ = true;
        return exit;
      }
      case Frame::Kind::Power: {
        if (f.remaining.is_zero()) {
          pop_frame();
          continue;
        }
        f.remaining.decrement();
        BodyRef body = f.body;
        push_body(body);  // invalidates f
        continue;
      }
      case Frame::Kind::Concat: {
        const TrajExpr* node = f.expr;
        if (f.pos >= node->children.size()) {
          pop_frame();
          continue;
        }
        const TrajExpr* child = &node->children[f.pos];
        if (f.pos + 1 < node->children.size()) {
          const TrajExpr& next = node->children[f.pos + 1];
          if (next.kind == TrajExpr::Kind::Reverse &&
              expr_equal(next.children[0], *child)) {
            f.pos += 2;
            Frame mir;
            mir.kind = Frame::Kind::Mirror;
            mir.body = BodyRef{BodyRef::Type::Expr, TrajForm::R, 0, child};
            mir.record = acquire_buffer();
            stack_.push_back(std::move(mir));  // invalidates f
            continue;
          }
        }
        f.pos += 1;
        push_expr(child);  // invalidates f
        continue;
      }
      case Frame::Kind::RvTop: {
        std::uint64_t piece = f.k;
        std::uint32_t bit = static_cast<std::uint32_t>(f.pos);
        std::uint64_t limit = std::min<std::uint64_t>(piece, bits_.size());
        if (f.phase == 0 || f.phase == 1) {
          bool one = bits_[bit - 1] != 0;
          TrajForm atom = one ? TrajForm::B : TrajForm::A;
          std::uint64_t atom_k = one ? 2 * piece : 4 * piece;
          set_element(piece, bit,
                      f.phase == 0 ? ElemKind::AtomFirst : ElemKind::AtomSecond);
          f.phase++;
          push_named(atom, atom_k);  // invalidates f
          continue;
        }
        // Separator after the segment: border inside the piece, fence at its
        // end.
        if (bit < limit) {
          set_element(piece, bit, ElemKind::Border);
          f.pos = bit + 1;
          f.phase = 0;
          push_named(TrajForm::K, piece);  // invalidates f
        } else {
          set_element(piece, bit, ElemKind::Fence);
          f.k = piece + 1;
          f.pos = 1;
          f.phase = 0;
          push_named(TrajForm::Omega, piece);  // invalidates f
        }
        continue;
      }
    }
  }
}

void RouteProgram::arrived(std::int32_t entry_port) {
  if (!move_pending_) throw std::logic_error("arrived without a pending move");
  move_pending_ = false;
  ++moves_completed_;
  for (Frame& fr : stack_) {
    if (fr.kind == Frame::Kind::Mirror && fr.phase == 1)
      fr.record.push_back(MoveRec{pending_exit_, entry_port});
  }
  Frame& f = stack_.back();
  switch (f.kind) {
    case Frame::Kind::Walk:
      f.entry_port = entry_port;
      f.pos++;
      break;
    case Frame::Kind::Replay:
      f.pos--;
      break;
    case Frame::Kind::XWalk:
      if (f.phase == 0) {
        f.record.push_back(MoveRec{pending_exit_, entry_port});
        f.entry_port = entry_port;
        f.pos++;
      } else {
        f.pos--;
      }
      break;
    case Frame::Kind::Interleave:
      f.entry_port = entry_port;
      f.pos++;
      f.phase = 0;
      break;
    default:
      throw std::logic_error("arrival fed to a non-emitting frame");
  }
  ann_.offset++;
  // Eagerly retire frames with no work left so done() and element-completion
  // events reflect this arrival immediately.
  while (!stack_.empty()) {
    Frame& top = stack_.back();
    bool finished = false;
    switch (top.kind) {
      case Frame::Kind::Walk:
        finished = top.pos >= top.seq->size();
        break;
      case Frame::Kind::Replay:
        finished = top.pos == 0;
        break;
      case Frame::Kind::XWalk:
        finished = top.phase == 1 && top.pos == 0;
        break;
      case Frame::Kind::Mirror:
        finished = top.phase == 2;
        break;
      case Frame::Kind::NamedSeq:
        finished = top.pos > top.k;
        break;
      case Frame::Kind::Interleave:
        finished = top.phase == 1 && top.pos >= top.seq->size();
        break;
      case Frame::Kind::Power:
        finished = top.remaining.is_zero();
        break;
      case Frame::Kind::Concat:
        finished = top.pos >= top.expr->children.size();
        break;
      case Frame::Kind::RvTop:
        finished = false;
        break;
    }
    if (!finished) break;
    pop_frame();
  }
}

std::vector<CompletedElement> rv_element_plan(const ModifiedLabel& label,
                                              std::uint64_t piece_count) {
  std::vector<CompletedElement> plan;
  const std::uint64_t s = label.bits.size();
  for (std::uint64_t k = 1; k <= piece_count; ++k) {
    const std::uint64_t limit = std::min(k, s);
    for (std::uint64_t i = 1; i <= limit; ++i) {
      plan.push_back({k, static_cast<std::uint32_t>(i), ElemKind::AtomFirst, 0});
      plan.push_back({k, static_cast<std::uint32_t>(i), ElemKind::AtomSecond, 0});
      if (i < limit) {
        plan.push_back({k, static_cast<std::uint32_t>(i), ElemKind::Border, 0});
      } else {
        plan.push_back({k, static_cast<std::uint32_t>(i), ElemKind::Fence, 0});
      }
    }
  }
  return plan;
}

MaterializeResult materialize_expr(const TrajExpr& expr,
                                   std::shared_ptr<const UxsProvider> provider,
                                   const PortLabeledGraph& graph, std::int32_t start,
                                   std::uint64_t max_moves, bool collect) {
  RouteProgram prog = RouteProgram::for_expr(expr, std::move(provider));
  MaterializeResult res;
  res.node_count = 1;
  res.end_node = start;
  if (collect) res.nodes.push_back(start);
  std::int32_t node = start;
  std::uint64_t moves = 0;
  while (!prog.done()) {
    std::int32_t exit = prog.next_exit(graph.degree(node));
    PortTarget t = graph.step(node, exit);
    prog.arrived(t.port);
    node = t.node;
    ++res.node_count;
    if (collect) res.nodes.push_back(node);
    if (++moves > max_moves)
      throw std::runtime_error("materialization exceeded move limit");
  }
  res.end_node = node;
  return res;
}

}  // namespace rvsim
