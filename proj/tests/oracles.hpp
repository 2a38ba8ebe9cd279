#pragma once

// Test-only oracles, deliberately independent of the library's stabilizer
// chain / enumeration internals: plain breadth-first closures and normal-form
// box enumeration.

#include <set>
#include <vector>

#include "rotaryforge/perm.hpp"

namespace oracle {

using rotary::Perm;

// Brute-force element closure; never uses PermGroup.
inline std::set<Perm> closure(const std::vector<Perm>& gens) {
  uint32_t deg = gens.empty() ? 1 : gens[0].degree();
  std::set<Perm> elems{Perm(deg)};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<Perm> next = elems;
    for (const Perm& e : elems)
      for (const Perm& g : gens)
        if (next.insert(e * g).second) grew = true;
    elems.swap(next);
  }
  return elems;
}

// Tight normal-form oracle: the set {s1^a s2^b ... } over the exponent box.
inline std::set<Perm> normal_form_box(const std::vector<Perm>& sigmas,
                                      const std::vector<int>& orders) {
  uint32_t deg = sigmas[0].degree();
  std::set<Perm> out{Perm(deg)};
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    std::set<Perm> next;
    for (const Perm& e : out) {
      Perm acc = e;
      for (int a = 0; a < orders[i]; ++a) {
        next.insert(acc);
        acc = acc * sigmas[i];
      }
    }
    out.swap(next);
  }
  return out;
}

inline std::set<Perm> naive_normal_closure(const std::vector<Perm>& group_gens,
                                           const std::vector<Perm>& seed) {
  // conjugate the seed by every element of the (small) group, then close
  std::set<Perm> G = closure(group_gens);
  std::vector<Perm> conj;
  for (const Perm& s : seed)
    for (const Perm& g : G) conj.push_back(g.inverse() * s * g);
  return closure(conj);
}

}  // namespace oracle
