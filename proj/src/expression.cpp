#include "expression.hpp"

#include <algorithm>
#include <sstream>

namespace tc {

namespace {
ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}

ExprPtr mk_gen(EndPoint s, EndPoint d, std::optional<Edge> orig) {
  return node({Expr::Kind::gen, std::move(s), std::move(d), std::move(orig), {}});
}
ExprPtr mk_id(EndPoint p) {
  return node({Expr::Kind::id, p, p, std::nullopt, {}});
}
ExprPtr mk_compose(std::vector<ExprPtr> layers) {
  return node({Expr::Kind::compose, {}, {}, std::nullopt, std::move(layers)});
}
ExprPtr mk_tensor(std::vector<ExprPtr> factors) {
  return node({Expr::Kind::tensor, {}, {}, std::nullopt, std::move(factors)});
}
ExprPtr mk_mult(ExprPtr l, ExprPtr r) {
  return node({Expr::Kind::mult, {}, {}, std::nullopt, {std::move(l), std::move(r)}});
}
ExprPtr mk_comult(ExprPtr l, ExprPtr r) {
  return node({Expr::Kind::comult, {}, {}, std::nullopt, {std::move(l), std::move(r)}});
}
ExprPtr mk_twist(ExprPtr l, ExprPtr r) {
  return node({Expr::Kind::twist, {}, {}, std::nullopt, {std::move(l), std::move(r)}});
}

// ---------------------------------------------------------------------------
// Extraction (step 9)

namespace {

struct Unit {
  ExprPtr expr;
  int top_min;
  std::vector<int> tops;     // domain slot positions consumed, in order
  std::vector<int> bottoms;  // codomain slot positions produced, in order
  bool single;
};

EndPoint ep(const Graph& g, const std::string& id) {
  const Vertex& v = g.at(id);
  return {v.label, v.color};
}

ExprPtr gen_for(const ReducedGraph& r, const Edge& e) {
  auto it = r.edge_origin.find(e);
  std::optional<Edge> orig = it == r.edge_origin.end() ? std::nullopt : std::optional<Edge>(it->second);
  return mk_gen(ep(r.graph, e.first), ep(r.graph, e.second), orig);
}

}  // namespace

ExprPtr extract_expr(const ReducedGraph& r) {
  const Graph& g = r.graph;
  if (!is_reduced(g)) throw err("NotReduced", "extract_expr requires a reduced graph");
  LevelOrdering lo = level_order(g);
  if (lo.levels.size() <= 1) {
    std::vector<ExprPtr> ids;
    if (!lo.levels.empty())
      for (const auto& v : lo.levels[0]) ids.push_back(mk_id(ep(g, v)));
    return mk_tensor(std::move(ids));
  }

  std::map<std::string, std::vector<Edge>> arr = in_edge_orders(g, lo);
  std::vector<ExprPtr> layers;
  for (std::size_t gap = 0; gap + 1 < lo.levels.size(); ++gap) {
    const auto& T = lo.levels[gap];
    const auto& B = lo.levels[gap + 1];
    auto tpos = [&](const std::string& id) {
      return static_cast<int>(std::find(T.begin(), T.end(), id) - T.begin());
    };
    auto bpos = [&](const std::string& id) {
      return static_cast<int>(std::find(B.begin(), B.end(), id) - B.begin());
    };

    std::vector<Unit> units;
    std::vector<bool> t_used(T.size(), false);
    // Fan-ins (mult) grouped by bottom vertex.
    for (const auto& b : B) {
      auto ait = arr.find(b);
      if (ait == arr.end() || ait->second.size() != 2) continue;
      const std::vector<Edge>& ins = ait->second;
      Unit u;
      u.expr = mk_mult(gen_for(r, ins[0]), gen_for(r, ins[1]));
      u.tops = {tpos(ins[0].first), tpos(ins[1].first)};
      u.top_min = std::min(u.tops[0], u.tops[1]);
      u.bottoms = {bpos(b)};
      u.single = false;
      units.push_back(std::move(u));
      t_used[tpos(ins[0].first)] = t_used[tpos(ins[1].first)] = true;
    }
    // Fan-outs (comult) and straight edges.
    for (const auto& t : T) {
      if (t_used[tpos(t)]) continue;
      const auto& outs = g.out_of(t);
      if (outs.size() == 2) {
        Unit u;
        u.expr = mk_comult(gen_for(r, {t, outs[0]}), gen_for(r, {t, outs[1]}));
        u.top_min = tpos(t);
        u.tops = {tpos(t)};
        u.bottoms = {bpos(outs[0]), bpos(outs[1])};
        u.single = false;
        units.push_back(std::move(u));
      } else if (outs.size() == 1) {
        Unit u;
        u.expr = gen_for(r, {t, outs[0]});
        u.top_min = tpos(t);
        u.tops = {tpos(t)};
        u.bottoms = {bpos(outs[0])};
        u.single = true;
        units.push_back(std::move(u));
      }
    }
    std::sort(units.begin(), units.end(),
              [](const Unit& a, const Unit& b) { return a.top_min < b.top_min; });

    // Adjacent single edges whose targets invert form a twist.
    for (bool merged = true; merged;) {
      merged = false;
      for (std::size_t j = 0; j + 1 < units.size(); ++j) {
        if (units[j].single && units[j + 1].single &&
            units[j].bottoms[0] > units[j + 1].bottoms[0]) {
          Unit tw;
          tw.expr = mk_twist(units[j].expr, units[j + 1].expr);
          tw.top_min = units[j].top_min;
          tw.tops = {units[j].tops[0], units[j + 1].tops[0]};
          tw.bottoms = {units[j + 1].bottoms[0], units[j].bottoms[0]};
          tw.single = false;
          units[j] = std::move(tw);
          units.erase(units.begin() + j + 1);
          merged = true;
          break;
        }
      }
    }

    std::vector<ExprPtr> factors;
    std::vector<int> seq, dom;
    for (const auto& u : units) {
      factors.push_back(u.expr);
      seq.insert(seq.end(), u.bottoms.begin(), u.bottoms.end());
      dom.insert(dom.end(), u.tops.begin(), u.tops.end());
    }

    // Domain permutation: swap layers below the core rearranging the level's
    // wire order into the order the units consume (interleaved fan-ins).
    std::vector<ExprPtr> pre;
    {
      std::vector<int> arr = dom;
      while (!std::is_sorted(arr.begin(), arr.end())) {
        std::size_t p = 0;
        while (arr[p] <= arr[p + 1]) ++p;
        std::vector<int> below = arr;
        std::swap(below[p], below[p + 1]);  // one step closer to level order
        std::vector<ExprPtr> fs;
        for (std::size_t q = 0; q < below.size(); ++q) {
          if (q == p) {
            fs.push_back(mk_twist(mk_id(ep(g, T[below[p]])), mk_id(ep(g, T[below[p + 1]]))));
            ++q;
          } else {
            fs.push_back(mk_id(ep(g, T[below[q]])));
          }
        }
        pre.push_back(mk_tensor(std::move(fs)));
        arr = below;
      }
    }
    for (std::size_t i = pre.size(); i-- > 0;) layers.push_back(pre[i]);

    layers.push_back(mk_tensor(std::move(factors)));

    // Residual permutation of codomain wires as explicit id-wire swaps.
    while (!std::is_sorted(seq.begin(), seq.end())) {
      std::size_t p = 0;
      while (seq[p] <= seq[p + 1]) ++p;
      std::vector<ExprPtr> swap_factors;
      for (std::size_t q = 0; q < seq.size(); ++q) {
        if (q == p) {
          swap_factors.push_back(
              mk_twist(mk_id(ep(g, B[seq[p]])), mk_id(ep(g, B[seq[p + 1]]))));
          ++q;
        } else {
          swap_factors.push_back(mk_id(ep(g, B[seq[q]])));
        }
      }
      layers.push_back(mk_tensor(std::move(swap_factors)));
      std::swap(seq[p], seq[p + 1]);
    }
  }
  if (layers.size() == 1) return layers[0];
  return mk_compose(std::move(layers));
}

// ---------------------------------------------------------------------------
// Equivalence via a port-DAG normal form

namespace {

struct PD {
  struct Out {
    int to;
    bool ident;  // inserted identity/copy edge (no original letter)
  };
  struct Node {
    std::string label;
    Color color;
    std::vector<int> ins;
    std::vector<Out> outs;
    bool dead = false;
  };
  std::vector<Node> nodes;
  std::vector<int> srcs, tgts;
};

struct Frag {
  std::vector<int> srcs, tgts;
};

void replace_ref(std::vector<int>& v, int from, int to) {
  for (int& x : v)
    if (x == from) x = to;
}

void replace_out(std::vector<PD::Out>& v, int from, int to) {
  for (auto& x : v)
    if (x.to == from) x.to = to;
}

// Merge node `b` into node `a`; `a` keeps its label. Mode selects which port
// lists are appended.
void merge_nodes(PD& pd, int a, int b, bool take_ins, bool take_outs) {
  if (pd.nodes[a].color != pd.nodes[b].color)
    throw err("InterfaceMismatch", "color mismatch when joining expression interfaces");
  if (take_ins) {
    for (int n : pd.nodes[b].ins) replace_out(pd.nodes[n].outs, b, a);
    pd.nodes[a].ins.insert(pd.nodes[a].ins.end(), pd.nodes[b].ins.begin(),
                           pd.nodes[b].ins.end());
  }
  if (take_outs) {
    for (const auto& o : pd.nodes[b].outs) replace_ref(pd.nodes[o.to].ins, b, a);
    pd.nodes[a].outs.insert(pd.nodes[a].outs.end(), pd.nodes[b].outs.begin(),
                            pd.nodes[b].outs.end());
  }
  pd.nodes[b].dead = true;
}

Frag build_pd(PD& pd, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::gen:
    case Expr::Kind::id: {
      int a = static_cast<int>(pd.nodes.size());
      pd.nodes.push_back({e->src.label, e->src.color, {}, {}, false});
      int b = static_cast<int>(pd.nodes.size());
      pd.nodes.push_back({e->dst.label, e->dst.color, {}, {}, false});
      bool ident = e->kind == Expr::Kind::id ||
                   (!e->orig_edge && e->src.label == e->dst.label && e->src.color == e->dst.color);
      pd.nodes[a].outs.push_back({b, ident});
      pd.nodes[b].ins.push_back(a);
      return {{a}, {b}};
    }
    case Expr::Kind::tensor: {
      Frag f;
      for (const auto& c : e->children) {
        Frag fc = build_pd(pd, c);
        f.srcs.insert(f.srcs.end(), fc.srcs.begin(), fc.srcs.end());
        f.tgts.insert(f.tgts.end(), fc.tgts.begin(), fc.tgts.end());
      }
      return f;
    }
    case Expr::Kind::compose: {
      if (e->children.empty()) return {};
      Frag acc = build_pd(pd, e->children.front());
      for (std::size_t i = 1; i < e->children.size(); ++i) {
        Frag nxt = build_pd(pd, e->children[i]);
        if (acc.tgts.size() != nxt.srcs.size())
          throw err("InterfaceMismatch", "layer arity mismatch in compose");
        for (std::size_t k = 0; k < acc.tgts.size(); ++k)
          merge_nodes(pd, acc.tgts[k], nxt.srcs[k], false, true);
        acc.tgts = nxt.tgts;
      }
      return acc;
    }
    case Expr::Kind::mult: {
      Frag l = build_pd(pd, e->children[0]), r = build_pd(pd, e->children[1]);
      if (l.tgts.size() != 1 || r.tgts.size() != 1)
        throw err("InterfaceMismatch", "mult children must have a single target");
      merge_nodes(pd, l.tgts[0], r.tgts[0], true, false);
      Frag f;
      f.srcs = l.srcs;
      f.srcs.insert(f.srcs.end(), r.srcs.begin(), r.srcs.end());
      f.tgts = {l.tgts[0]};
      return f;
    }
    case Expr::Kind::comult: {
      Frag l = build_pd(pd, e->children[0]), r = build_pd(pd, e->children[1]);
      if (l.srcs.size() != 1 || r.srcs.size() != 1)
        throw err("InterfaceMismatch", "comult children must have a single source");
      merge_nodes(pd, l.srcs[0], r.srcs[0], false, true);
      Frag f;
      f.srcs = {l.srcs[0]};
      f.tgts = l.tgts;
      f.tgts.insert(f.tgts.end(), r.tgts.begin(), r.tgts.end());
      return f;
    }
    case Expr::Kind::twist: {
      Frag l = build_pd(pd, e->children[0]), r = build_pd(pd, e->children[1]);
      Frag f;
      f.srcs = l.srcs;
      f.srcs.insert(f.srcs.end(), r.srcs.begin(), r.srcs.end());
      f.tgts = r.tgts;  // codomain order swaps the factors
      f.tgts.insert(f.tgts.end(), l.tgts.begin(), l.tgts.end());
      return f;
    }
  }
  throw err("InterfaceMismatch", "unknown expression node");
}

// Copy chains keep the vertex of whichever factor came first: push labels
// forward along inserted identity edges so all copies of one glued vertex
// compare equal (the pushout identifies them).
void propagate_copy_labels(PD& pd) {
  // Kahn order over alive nodes.
  std::vector<int> indeg(pd.nodes.size(), 0);
  for (const auto& n : pd.nodes)
    if (!n.dead)
      for (const auto& o : n.outs) ++indeg[o.to];
  std::vector<int> queue;
  for (std::size_t i = 0; i < pd.nodes.size(); ++i)
    if (!pd.nodes[i].dead && indeg[i] == 0) queue.push_back(static_cast<int>(i));
  while (!queue.empty()) {
    int a = queue.back();
    queue.pop_back();
    for (const auto& o : pd.nodes[a].outs) {
      if (o.ident) pd.nodes[o.to].label = pd.nodes[a].label;
      if (--indeg[o.to] == 0) queue.push_back(o.to);
    }
  }
}

// Contract identity edges. Two rules: (a) merge an identity edge whose source
// has a sole out-edge and whose target has a sole in-edge; (b) splice out a
// pass-through vertex (one in, one out) whose in- or out-edge is an identity,
// so identities riding a fan leg also disappear.
void contract_identities(PD& pd) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < pd.nodes.size() && !changed; ++a) {
      auto& na = pd.nodes[a];
      if (na.dead) continue;
      if (na.outs.size() == 1) {
        int b = na.outs[0].to;
        auto& nb = pd.nodes[b];
        if (nb.ins.size() == 1 && na.label == nb.label && na.color == nb.color) {
          na.outs = nb.outs;
          for (const auto& o : nb.outs) replace_ref(pd.nodes[o.to].ins, b, static_cast<int>(a));
          replace_ref(pd.tgts, b, static_cast<int>(a));
          nb.dead = true;
          changed = true;
          continue;
        }
      }
      if (na.ins.size() == 1 && na.outs.size() == 1) {
        int p = na.ins[0], c = na.outs[0].to;
        auto& np = pd.nodes[p];
        auto& nc = pd.nodes[c];
        bool id_in = np.label == na.label && np.color == na.color;
        bool id_out = na.label == nc.label && na.color == nc.color;
        if (id_in || id_out) {
          replace_out(np.outs, static_cast<int>(a), c);
          replace_ref(nc.ins, static_cast<int>(a), p);
          na.dead = true;
          changed = true;
        }
      }
    }
  }
}

std::string canon(const PD& pd) {
  std::vector<int> disc(pd.nodes.size(), -1);
  std::vector<int> order;
  auto dfs = [&](auto&& self, int n) -> void {
    if (disc[n] >= 0) return;
    disc[n] = static_cast<int>(order.size());
    order.push_back(n);
    for (const auto& o : pd.nodes[n].outs) self(self, o.to);
  };
  for (int s : pd.srcs) dfs(dfs, s);
  std::size_t alive = 0;
  for (const auto& n : pd.nodes)
    if (!n.dead) ++alive;
  std::ostringstream os;
  os << "n" << alive << ";S";
  for (int s : pd.srcs) os << ":" << disc[s];
  os << ";T";
  for (int t : pd.tgts) os << ":" << disc[t];
  for (int n : order) {
    os << ";" << pd.nodes[n].label << "|" << color_name(pd.nodes[n].color) << "|o";
    for (const auto& o : pd.nodes[n].outs) os << ":" << disc[o.to];
    os << "|i";
    for (int m : pd.nodes[n].ins) os << ":" << disc[m];
  }
  if (order.size() != alive) os << ";unreached";
  return os.str();
}

std::string normal_form(const ExprPtr& e) {
  PD pd;
  Frag f = build_pd(pd, e);
  pd.srcs = f.srcs;
  pd.tgts = f.tgts;
  propagate_copy_labels(pd);
  contract_identities(pd);
  return canon(pd);
}

}  // namespace

bool exprs_equivalent(const ExprPtr& a, const ExprPtr& b) {
  try {
    return normal_form(a) == normal_form(b);
  } catch (const domain_error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Pretty printing (outermost layer first, left-nested n-ary operators)

namespace {

int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::compose: return 1;
    case Expr::Kind::tensor: return 2;
    case Expr::Kind::mult:
    case Expr::Kind::comult:
    case Expr::Kind::twist: return 3;
    default: return 4;
  }
}

void print(std::ostream& os, const ExprPtr& e, int parent_prec) {
  bool paren = prec(*e) <= parent_prec && prec(*e) < 4;
  if (paren) os << "(";
  switch (e->kind) {
    case Expr::Kind::gen:
      os << "(" << e->src.label << "," << e->dst.label << ")";
      break;
    case Expr::Kind::id:
      os << "id_" << e->src.label;
      break;
    case Expr::Kind::compose:
      for (std::size_t i = e->children.size(); i-- > 0;) {
        print(os, e->children[i], 1);
        if (i > 0) os << " ∘ ";
      }
      break;
    case Expr::Kind::tensor:
      if (e->children.empty()) {
        os << "1";
      } else {
        for (std::size_t i = 0; i < e->children.size(); ++i) {
          if (i > 0) os << " ⊗ ";
          print(os, e->children[i], 2);
        }
      }
      break;
    case Expr::Kind::mult:
      print(os, e->children[0], 3);
      os << " ∧ ";
      print(os, e->children[1], 3);
      break;
    case Expr::Kind::comult:
      print(os, e->children[0], 3);
      os << " ∨ ";
      print(os, e->children[1], 3);
      break;
    case Expr::Kind::twist:
      print(os, e->children[0], 3);
      os << " ⊠ ";
      print(os, e->children[1], 3);
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string pretty(const ExprPtr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

}  // namespace tc
