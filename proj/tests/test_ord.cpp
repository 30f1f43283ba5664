#include <doctest.h>

#include <random>

#include "tw/ord.hpp"

using namespace tw;

namespace {

Ord rand_ord(std::mt19937_64& rng, const AtomTable& atoms, bool with_atoms = true) {
  std::vector<OrdPart> parts;
  if (with_atoms && rng() % 3 == 0) {
    const auto& all = atoms.all();
    parts.push_back(OrdPart{all[rng() % all.size()], 1, 1 + rng() % 3});
  }
  Nat exp = 3;
  while (exp > 0 && rng() % 2) {
    parts.push_back(OrdPart{std::nullopt, exp, 1 + rng() % 4});
    exp -= 1 + rng() % 3;
  }
  // keep atom parts sorted ahead of omega parts by descending rank
  std::sort(parts.begin(), parts.end(), [](const OrdPart& a, const OrdPart& b) {
    auto key = [](const OrdPart& p) {
      return p.atom ? std::pair<int, Nat>(1, static_cast<Nat>(p.atom->rank()))
                    : std::pair<int, Nat>(0, p.exp);
    };
    return key(a) > key(b);
  });
  return Ord::make(std::move(parts), rng() % 5);
}

}  // namespace

TEST_CASE("ordinal comparison") {
  AtomTable atoms;
  Ord a = ord_add(Ord::omega(1, 2), Ord::finite(3));  // w*2+3
  Ord b = Ord::omega(1, 3);                           // w*3
  CHECK(ord_cmp(a, b) == std::strong_ordering::less);
  CHECK(ord_cmp(Ord::of_atom(atoms.k1()), Ord::omega(5)) == std::strong_ordering::greater);
  CHECK(ord_cmp(Ord(), Ord()) == std::strong_ordering::equal);
}

TEST_CASE("ordinal addition") {
  CHECK(ord_eq(ord_add(Ord::finite(1), Ord::omega()), Ord::omega()));
  CHECK(ord_add(Ord::omega(), Ord::finite(1)).str() == "w+1");
  Ord a = ord_add(Ord::omega(1, 2), Ord::finite(3));
  CHECK(ord_add(a, Ord::omega()).str() == "w*3");
}

TEST_CASE("successor") {
  CHECK(ord_succ(Ord()).str() == "1");
  CHECK(ord_succ(Ord::omega()).str() == "w+1");
  Ord a = ord_add(Ord::omega(1, 2), Ord::finite(3));
  CHECK(ord_succ(a).str() == "w*2+4");
}

TEST_CASE("left subtraction") {
  Ord w23 = ord_add(Ord::omega(1, 2), Ord::finite(3));
  auto d = ord_left_sub(w23, Ord::omega(1, 3));
  REQUIRE(d);
  CHECK(d->str() == "w");
  CHECK(!ord_left_sub(Ord::omega(), Ord::finite(5)));
  CHECK(ord_left_sub(Ord::finite(2), Ord::finite(7))->str() == "5");
}

TEST_CASE("ordinal parts split at an atom") {
  AtomTable atoms;
  Ord x = ord_add(Ord::of_atom(atoms.L(), 2), ord_add(Ord::omega(), Ord::finite(5)));
  auto s = ord_split_at_atom(x, atoms.L());
  REQUIRE(s);
  CHECK(s->first == 2);
  CHECK(s->second.str() == "w+5");
  // a part above the atom blocks the split
  Ord y = Ord::of_atom(atoms.L());
  CHECK(!ord_split_at_atom(y, atoms.k1()));
}

TEST_CASE("comparison is a strict total order on samples") {
  AtomTable atoms;
  std::mt19937_64 rng(7);
  std::vector<Ord> xs;
  for (int i = 0; i < 60; ++i) xs.push_back(rand_ord(rng, atoms));
  int pairs = 0;
  for (const Ord& a : xs)
    for (const Ord& b : xs) {
      auto ab = ord_cmp(a, b);
      auto ba = ord_cmp(b, a);
      CHECK(((ab == std::strong_ordering::equal) == (ba == std::strong_ordering::equal)));
      if (ab == std::strong_ordering::less) CHECK(ba == std::strong_ordering::greater);
      for (const Ord& c : xs) {
        if (ord_le(a, b) && ord_le(b, c)) CHECK(ord_le(a, c));
        ++pairs;
      }
    }
  CHECK(pairs >= 1000);
}

TEST_CASE("addition is associative on sampled triples") {
  AtomTable atoms;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    Ord a = rand_ord(rng, atoms), b = rand_ord(rng, atoms), c = rand_ord(rng, atoms);
    CHECK(ord_eq(ord_add(ord_add(a, b), c), ord_add(a, ord_add(b, c))));
  }
}

TEST_CASE("successor is strictly increasing") {
  AtomTable atoms;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    Ord a = rand_ord(rng, atoms);
    CHECK(ord_lt(a, ord_succ(a)));
  }
}

TEST_CASE("order isomorphism examples") {
  AtomTable atoms;
  auto i1 = OrderTerm::interval(Ord::omega(), Ord());
  auto i2 = OrderTerm::interval(Ord::omega(), Ord::finite(5));
  CHECK(order_iso(*i1, *i2));

  Ord k = Ord::of_atom(atoms.k1());
  auto j1 = OrderTerm::interval(k, ord_add(Ord::omega(1, 3), Ord::finite(1)));
  auto j2 = OrderTerm::interval(k, Ord());
  CHECK(order_iso(*j1, *j2));

  auto w = OrderTerm::interval(Ord::omega(), Ord());
  auto w1more = OrderTerm::interval(ord_succ(Ord::omega()), Ord());
  CHECK(!order_iso(*w, *w1more));
}

TEST_CASE("interval end segments of a regular bound are isomorphic") {
  AtomTable atoms;
  std::mt19937_64 rng(10);
  Ord k = Ord::of_atom(atoms.k1());
  for (int i = 0; i < 50; ++i) {
    Ord b1 = rand_ord(rng, atoms, false);
    Ord b2 = rand_ord(rng, atoms, false);
    auto t1 = OrderTerm::interval(k, b1);
    auto t2 = OrderTerm::interval(k, b2);
    CHECK(order_iso(*t1, *t2));
  }
}

TEST_CASE("order isomorphism is an equivalence on a finite sample") {
  AtomTable atoms;
  std::vector<OrderPtr> ts = {
      OrderTerm::fin(3),
      OrderTerm::fin(3),
      OrderTerm::interval(Ord::omega(), Ord()),
      OrderTerm::interval(Ord::omega(), Ord::finite(2)),
      OrderTerm::interval(Ord::of_atom(atoms.k1()), Ord()),
      OrderTerm::sum(OrderTerm::fin(2), OrderTerm::interval(Ord::omega(), Ord())),
      OrderTerm::reverse(OrderTerm::interval(Ord::omega(), Ord())),
      OrderTerm::repeat_omega1(OrderTerm::interval(Ord::of_atom(atoms.L()), Ord())),
  };
  for (const auto& a : ts) {
    CHECK(order_iso(*a, *a));
    for (const auto& b : ts) {
      CHECK(order_iso(*a, *b) == order_iso(*b, *a));
      for (const auto& c : ts)
        if (order_iso(*a, *b) && order_iso(*b, *c)) CHECK(order_iso(*a, *c));
    }
  }
  // a small order prepended to an omega interval is absorbed
  CHECK(order_iso(*ts[5], *ts[2]));
}

TEST_CASE("cofinality") {
  AtomTable atoms;
  CHECK(cofinality(*OrderTerm::interval(Ord::omega(), Ord())).str() == "w");
  CHECK(cofinality(*OrderTerm::interval(Ord::of_atom(atoms.k1()), Ord::omega())).str() == "k1");
  auto rep = OrderTerm::repeat_omega1(OrderTerm::interval(Ord::of_atom(atoms.L()), Ord()));
  CHECK(cofinality(*rep).str() == "w1");
  CHECK(cofinality(*OrderTerm::fin(4)).str() == "1");
  CHECK_THROWS_AS(cofinality(*OrderTerm::fin(0)), Error);
}

TEST_CASE("atom table declarations") {
  AtomTable atoms;
  CHECK(atoms.find("w1"));
  CHECK(atoms.find("k1"));
  CHECK(atoms.find("L"));
  Atom m = atoms.declare("m4");
  CHECK(m.rank() > atoms.L().rank());
  CHECK_THROWS_AS(atoms.declare("k1"), Error);
  CHECK_THROWS_AS(atoms.declare("fresh", 0), Error);  // rank collision with w1
}
