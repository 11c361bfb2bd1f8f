#include "freeprod/group_action.hpp"

#include <algorithm>
#include <set>

namespace freeprod {

int FiniteGroup::index_of(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(elements.size()); ++i) {
    if (elements[i] == id) return i;
  }
  throw DomainError("unknown group element '" + id + "'");
}

int FiniteGroup::inverse(int a) const {
  for (int b = 0; b < static_cast<int>(elements.size()); ++b) {
    if (table[a][b] == identity) return b;
  }
  throw DomainError("element '" + elements[a] + "' has no inverse");
}

std::vector<std::string> FiniteGroup::check_axioms(const std::string& path) const {
  std::vector<std::string> problems;
  const int n = static_cast<int>(elements.size());
  if (n == 0) {
    problems.push_back(path + ": empty element list");
    return problems;
  }
  if (static_cast<int>(table.size()) != n) {
    problems.push_back(path + ".table: expected " + std::to_string(n) + " rows");
    return problems;
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n) {
      problems.push_back(path + ".table: row " + std::to_string(i) + " has wrong length");
      return problems;
    }
    for (int j = 0; j < n; ++j) {
      if (table[i][j] < 0 || table[i][j] >= n) {
        problems.push_back(path + ".table: entry out of range");
        return problems;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (table[identity][i] != i || table[i][identity] != i) {
      problems.push_back(path + ": '" + elements[identity] + "' is not an identity");
      break;
    }
  }
  for (int a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < n; ++b) has_inverse = has_inverse || table[a][b] == identity;
    if (!has_inverse) problems.push_back(path + ": '" + elements[a] + "' has no inverse");
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          problems.push_back(path + ".table: associativity fails");
          return problems;
        }
      }
    }
  }
  return problems;
}

FreeProductAction::FreeProductAction(std::shared_ptr<const FpSpace> space, FiniteGroup g,
                                     FiniteGroup h)
    : space_(std::move(space)), g_(std::move(g)), h_(std::move(h)) {
  graph_x_ = dynamic_cast<const UnitGraphSpace*>(&space_->factor(Side::X));
  graph_y_ = dynamic_cast<const UnitGraphSpace*>(&space_->factor(Side::Y));
  if (graph_x_ == nullptr || graph_y_ == nullptr) {
    throw CapabilityError("group actions require graph factors");
  }
}

Letter FreeProductAction::letter_of(Side side, int elem) const {
  return Letter{side, group(side).elements[elem]};
}

int FreeProductAction::elem_of(const Letter& z) const { return group(z.side).index_of(z.id); }

NormalWord FreeProductAction::multiply(const NormalWord& a, const NormalWord& b) const {
  std::vector<Letter> stack(a.letters());
  for (const Letter& z : b.letters()) {
    if (!stack.empty() && stack.back().side == z.side) {
      const FiniteGroup& grp = group(z.side);
      const int c = grp.mul(elem_of(stack.back()), elem_of(z));
      stack.pop_back();
      if (c != grp.identity) stack.push_back(letter_of(z.side, c));
    } else {
      stack.push_back(z);
    }
  }
  return NormalWord::validate(std::move(stack));
}

NormalWord FreeProductAction::inverse_word(const NormalWord& a) const {
  std::vector<Letter> out;
  out.reserve(a.length());
  for (std::size_t i = a.length(); i > 0; --i) {
    const Letter& z = a.letter(i - 1);
    out.push_back(letter_of(z.side, group(z.side).inverse(elem_of(z))));
  }
  return NormalWord::validate(std::move(out));
}

NormalWord FreeProductAction::make_element(const std::vector<std::string>& ids) const {
  return space_->make_word(ids);
}

FactorPoint FreeProductAction::apply_factor(Side side, int elem, const FactorPoint& p) const {
  const std::vector<int>& perm = group(side).vertex_perm[elem];
  if (const auto* vp = std::get_if<VertexPoint>(&p)) return VertexPoint{perm[vp->v]};
  const auto& ep = std::get<EdgeInteriorPoint>(p);
  const int pu = perm[ep.u];
  const int pv = perm[ep.v];
  if (pu < pv) return EdgeInteriorPoint{pu, pv, ep.s};
  return EdgeInteriorPoint{pv, pu, 1.0 - ep.s};
}

FpPoint FreeProductAction::act(const NormalWord& a, const FpPoint& p) const {
  space_->check_point(p);

  if (const auto* sp = std::get_if<SheetPoint>(&p)) {
    NormalWord word = multiply(a, sp->word);
    FactorPoint site = sp->site;
    // (w g, x) ~ (w, g(x)): peel trailing letters whose group acts on the
    // site's factor. Alternation means at most one peel fires.
    while (!word.empty() && word.back().side == sp->side) {
      site = apply_factor(sp->side, elem_of(word.back()), site);
      word = word.drop_back();
    }
    return SheetPoint{word, sp->side, site};
  }

  // Edge points transform through their index-word coordinate. In that
  // parametrization t = 0 sits at the e_X end, which matches the stored
  // parameter for X-letter edges and flips it for Y-letter edges.
  NormalWord coord;
  double t_z;
  if (const auto* ep = std::get_if<EdgePoint>(&p)) {
    coord = multiply(a, ep->word.append(ep->letter));
    t_z = ep->letter.side == Side::X ? ep->t : 1.0 - ep->t;
  } else {
    coord = multiply(a, NormalWord{});
    t_z = std::get<EpsEdgePoint>(p).t;
  }
  if (coord.empty()) return EpsEdgePoint{t_z};
  const Letter last = coord.back();
  const double t = last.side == Side::X ? t_z : 1.0 - t_z;
  return EdgePoint{coord.drop_back(), last, t};
}

std::vector<NormalWord> FreeProductAction::elements_up_to(std::size_t max_len) const {
  std::vector<NormalWord> out{NormalWord{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const NormalWord w = out[i];
      for (Side side : {Side::X, Side::Y}) {
        if (!w.empty() && w.back().side == side) continue;
        const FiniteGroup& grp = group(side);
        for (const std::string& id : space_->factor(side).net().ids) {
          if (id == grp.elements[grp.identity]) continue;
          out.push_back(w.append(Letter{side, id}));
        }
      }
    }
    level_begin = level_end;
  }
  return out;
}

long long FreeProductAction::orbit_count(std::size_t max_len, const FpPoint& o, double R) const {
  long long count = 0;
  for (const NormalWord& a : elements_up_to(max_len)) {
    if (space_->dist(act(a, o), o) <= R) ++count;
  }
  return count;
}

std::vector<std::string> FreeProductAction::validate() const {
  std::vector<std::string> problems;
  for (Side side : {Side::X, Side::Y}) {
    const FiniteGroup& grp = group(side);
    const std::string path = side == Side::X ? ".groups.G" : ".groups.H";
    auto axioms = grp.check_axioms(path);
    problems.insert(problems.end(), axioms.begin(), axioms.end());
    if (!axioms.empty()) continue;

    const UnitGraphSpace& graph = side == Side::X ? *graph_x_ : *graph_y_;
    const int n = static_cast<int>(grp.elements.size());
    const int nv = graph.vertex_count();

    if (static_cast<int>(grp.vertex_perm.size()) != n) {
      problems.push_back(path + ".action: one permutation per element required");
      continue;
    }
    for (int a = 0; a < n; ++a) {
      const auto& perm = grp.vertex_perm[a];
      std::set<int> seen(perm.begin(), perm.end());
      if (static_cast<int>(perm.size()) != nv || static_cast<int>(seen.size()) != nv) {
        problems.push_back(path + ".action: element '" + grp.elements[a] +
                           "' is not a vertex permutation");
        continue;
      }
      // Isometric action on a unit graph = graph automorphism.
      for (int u = 0; u < nv; ++u) {
        for (int v : graph.adjacency()[u]) {
          const auto& nb = graph.adjacency()[perm[u]];
          if (!std::binary_search(nb.begin(), nb.end(), perm[v])) {
            problems.push_back(path + ".action: '" + grp.elements[a] +
                               "' does not preserve adjacency");
            u = nv;
            break;
          }
        }
      }
    }
    for (int a = 0; a < n && static_cast<int>(grp.vertex_perm.size()) == n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int v = 0; v < nv; ++v) {
          if (grp.vertex_perm[grp.mul(a, b)][v] != grp.vertex_perm[a][grp.vertex_perm[b][v]]) {
            problems.push_back(path + ".action: table and permutations disagree");
            a = b = n;
            break;
          }
        }
      }
    }

    // The paired net must be exactly the orbit net of the base point.
    const Net& net = graph.net();
    if (net.ids.size() != grp.elements.size()) {
      problems.push_back(path + ": net ids and group elements differ in count");
      continue;
    }
    for (const auto& id : grp.elements) {
      if (!net.contains(id)) {
        problems.push_back(path + ": group element '" + id + "' missing from the net");
      }
    }
    if (net.eps != grp.elements[grp.identity]) {
      problems.push_back(path + ": net eps is not the group identity");
    }
    const int base = std::get<VertexPoint>(graph.basepoint()).v;
    for (int a = 0; a < n; ++a) {
      if (!net.contains(grp.elements[a])) continue;
      const FactorPoint orbit = VertexPoint{grp.vertex_perm[a][base]};
      if (!(net.image_of(grp.elements[a]) == orbit)) {
        problems.push_back(path + ": net image of '" + grp.elements[a] +
                           "' is not the orbit of the base point");
      }
    }
  }
  return problems;
}

}  // namespace freeprod
