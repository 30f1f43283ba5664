#include <doctest.h>

#include <random>

#include "tw/oracle.hpp"
#include "tw/specker.hpp"

using namespace tw;

namespace {

Term g(const Session& s, Ord coord) { return ast::lit(designated_letter(s, std::move(coord))); }

GDescription bits_at(std::initializer_list<std::pair<Nat, int>> exc, int def = 0) {
  std::vector<std::pair<Ord, int>> e;
  for (auto& [k, v] : exc) e.emplace_back(Ord::finite(k), v);
  return GDescription::make(def, std::move(e));
}

}  // namespace

TEST_CASE("family word construction") {
  Session s;
  Term mk = build_M_kappa(s, s.atoms.k1());
  const auto* gs = std::get_if<GenSeqT>(&mk->node);
  REQUIRE(gs);
  CHECK(gs->fun.kind == LetterFun::Kind::canonical);
  CHECK(ord_eq(gs->bound, Ord::of_atom(s.atoms.k1())));
  CHECK(validate_word(mk, s).valid);

  Word m = reduce(mk, s);
  CHECK(word_iso(tail_at(m, Ord(), s), m));

  CHECK_THROWS_AS(build_M_kappa(s, Ord::omega()), Error);
  Atom sing = s.atoms.declare("sng", std::nullopt, false, true);
  CHECK_THROWS_AS(build_M_kappa(s, sing), Error);
}

TEST_CASE("bit-pattern word letters follow the formula") {
  Session s;
  // all-zero description: block letter at beta is the designated letter there
  Term mg0 = build_M_g(s, GDescription{}, s.atoms.L());
  std::vector<Ord> F = {Ord::finite(7)};
  FiniteWord r = restrict_finite(mg0, F, s);
  REQUIRE(r.letters.size() == 1);
  CHECK(r.letters[0] == designated_letter(s, Ord::finite(7)));

  // exception at 0: the block letter at 0 sits at coordinate 2
  Term mg1 = build_M_g(s, bits_at({{0, 1}}), s.atoms.L());
  std::vector<Ord> F0 = {Ord::finite(0)};
  CHECK(restrict_finite(mg1, F0, s).empty());  // coordinate 0 is skipped
  CHECK(validate_word(mg1, s).valid);

  CHECK_THROWS_AS(build_M_g(s, GDescription{}, s.atoms.declare("cnt", std::nullopt, true, false)),
                  Error);
}

TEST_CASE("adjacency safety of the bit formula") {
  // positions p and p+1 land at p+2b and p+1+2b'; disjoint for all four bits
  for (int b1 = 0; b1 <= 1; ++b1)
    for (int b2 = 0; b2 <= 1; ++b2) CHECK(2 * b1 != 1 + 2 * b2);
  Session s;
  CHECK(validate_word(build_M_g(s, bits_at({{0, 1}, {3, 1}}), s.atoms.L()), s).valid);
}

TEST_CASE("occurrences of canonical tails") {
  Session s;
  Atom k = s.atoms.k1();
  PatternFamily fam = PatternFamily::canonical(k);
  Term mk = build_M_kappa(s, k);

  auto occ1 = occurrences(reduce(mk, s), fam, s);
  REQUIRE(occ1.size() == 1);
  CHECK(occ1[0].sign == +1);
  CHECK(ord_eq(occ1[0].matched_tail, Ord()));

  Word two = reduce(ast::concat({mk, g(s, Ord()), mk}), s);
  auto occ2 = occurrences(two, fam, s);
  CHECK(occ2.size() == 2);
  for (const auto& o : occ2) CHECK(o.sign == +1);

  Word ext = reduce(ast::concat({g(s, Ord::finite(3)), ast::seg(mk, Ord::finite(4))}), s);
  auto occ3 = occurrences(ext, fam, s);
  REQUIRE(occ3.size() == 1);
  CHECK(ord_eq(occ3[0].matched_tail, Ord::finite(3)));
}

TEST_CASE("class counts and signs") {
  Session s;
  Atom k = s.atoms.k1();
  PatternFamily fam = PatternFamily::canonical(k);
  Term mk = build_M_kappa(s, k);

  OccReport plus = class_count(reduce(mk, s), fam, s);
  CHECK(plus.plus == 1);
  CHECK(plus.minus == 0);

  OccReport minus = class_count(reduce(ast::inv(mk), s), fam, s);
  CHECK(minus.plus == 0);
  CHECK(minus.minus == 1);

  OccReport none = class_count(reduce(ast::empty(), s), fam, s);
  CHECK(none.plus == 0);
  CHECK(none.minus == 0);
}

TEST_CASE("phi values") {
  Session s;
  Atom k = s.atoms.k1();
  PatternFamily fam = PatternFamily::canonical(k);
  Term mk = build_M_kappa(s, k);
  CHECK(phi_eval(mk, fam, s) == 1);
  CHECK(phi_eval(ast::inv(mk), fam, s) == -1);
  Term cancel =
      ast::concat({ast::seg(mk, Ord::finite(4)), ast::inv(ast::seg(mk, Ord::finite(4)))});
  CHECK(phi_eval(cancel, fam, s) == 0);
}

TEST_CASE("phi counts bit-pattern families per description") {
  Session s;
  PatternFamily f0 = PatternFamily::bits(GDescription{}, s.atoms.L());
  PatternFamily f1 = PatternFamily::bits(bits_at({{0, 1}}), s.atoms.L());
  Term m0 = build_M_g(s, GDescription{}, s.atoms.L());
  Term m1 = build_M_g(s, bits_at({{0, 1}}), s.atoms.L());
  CHECK(phi_eval(m0, f0, s) == 1);
  CHECK(phi_eval(m1, f1, s) == 1);
  CHECK(phi_eval(m0, f1, s) == 0);
  CHECK(phi_eval(m1, f0, s) == 0);
  CHECK(phi_eval(ast::inv(m1), f1, s) == -1);
  CHECK(phi_eval(ast::concat({m0, m0}), f0, s) == 2);
}

TEST_CASE("separation of pattern families") {
  Session s;
  PatternFamily f0 = PatternFamily::bits(GDescription{}, s.atoms.L());
  PatternFamily f1 = PatternFamily::bits(bits_at({{0, 1}}), s.atoms.L());
  PatternFamily fk = PatternFamily::canonical(s.atoms.k1());
  PatternFamily fL = PatternFamily::canonical(s.atoms.L());
  CHECK(!star_check(f0, f0));
  CHECK(star_check(f0, f1));
  CHECK(star_check(fk, f0));
  CHECK(star_check(fk, fL));
  CHECK(!star_check(fk, fk));

  // cross-validated on finite chunk instances
  CHECK(star_bruteforce(s, GDescription{}, bits_at({{0, 1}}), 3, 3));
}

TEST_CASE("homomorphism matrix over singleton index sets") {
  Session s;
  std::vector<SpeckerHom> homs;
  std::vector<GDescription> descs;
  for (Nat i = 0; i < 4; ++i) descs.push_back(bits_at({{i, 1}}));
  for (const auto& d : descs)
    homs.push_back(SpeckerHom::make({PatternFamily::bits(d, s.atoms.L())}));
  auto m = hom_matrix(homs, s);
  REQUIRE(m.size() == 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) CHECK(m[i][j] == (i == j ? 1 : 0));
}

TEST_CASE("index sets with shared members still mark their own words") {
  Session s;
  auto fam = [&](Nat i) { return PatternFamily::bits(bits_at({{i, 1}}), s.atoms.L()); };
  std::vector<SpeckerHom> homs = {SpeckerHom::make({fam(0), fam(1)}),
                                  SpeckerHom::make({fam(1), fam(2)})};
  auto m = hom_matrix(homs, s);
  // columns: d0, d1, d2
  CHECK(m[0] == std::vector<long long>{1, 1, 0});
  CHECK(m[1] == std::vector<long long>{0, 1, 1});
  CHECK(m[0] != m[1]);
}

TEST_CASE("witness reports") {
  Session s;
  Atom k = s.atoms.k1();
  std::vector<Ord> F = {Ord::finite(0), Ord::finite(1), Ord::finite(2)};
  WitnessReport w = specker_witness(F, k, s);
  CHECK(ord_eq(w.beta, Ord::finite(3)));
  CHECK(w.restriction.empty());
  CHECK(w.phi == 1);
  CHECK(w.ok());

  WitnessReport e = specker_witness({}, k, s);
  CHECK(ord_eq(e.beta, Ord()));
  CHECK(e.ok());

  std::vector<Ord> Fw = {Ord::omega()};
  WitnessReport ww = specker_witness(Fw, k, s);
  CHECK(ord_eq(ww.beta, ord_succ(Ord::omega())));
  CHECK(ww.ok());
}

TEST_CASE("phi is antisymmetric and additive on sampled terms") {
  Session s;
  std::mt19937_64 rng(404);
  Atom k = s.atoms.k1();
  PatternFamily fam = PatternFamily::canonical(k);
  Term mk = build_M_kappa(s, k);
  GDescription d1 = bits_at({{1, 1}});
  Term mg = build_M_g(s, d1, s.atoms.L());
  PatternFamily famg = PatternFamily::bits(d1, s.atoms.L());

  auto sample = [&]() -> Term {
    switch (rng() % 6) {
      case 0:
        return ast::seg(mk, Ord::finite(rng() % 5));
      case 1:
        return ast::inv(ast::seg(mk, Ord::finite(rng() % 5)));
      case 2:
        return g(s, Ord::finite(rng() % 6));
      case 3:
        return ast::seg(mg, Ord::finite(rng() % 4));
      case 4:
        return ast::inv(mg);
      default: {
        std::vector<Term> parts;
        parts.push_back(rng() % 2 ? ast::seg(mk, Ord::finite(rng() % 4)) : g(s, Ord::finite(rng() % 4)));
        parts.push_back(rng() % 2 ? ast::inv(ast::seg(mk, Ord::finite(rng() % 4))) : mg);
        return ast::concat(std::move(parts));
      }
    }
  };
  for (int i = 0; i < 80; ++i) {
    Term x = sample(), y = sample();
    for (const PatternFamily& f : {fam, famg}) {
      CHECK(phi_eval(ast::inv(x), f, s) == -phi_eval(x, f, s));
      CHECK(phi_eval(ast::concat({x, y}), f, s) == phi_eval(x, f, s) + phi_eval(y, f, s));
    }
  }
}

TEST_CASE("phi is stable under reduction and isomorphism") {
  Session s;
  Atom k = s.atoms.k1();
  PatternFamily fam = PatternFamily::canonical(k);
  Term mk = build_M_kappa(s, k);
  Term messy = ast::concat({g(s, Ord::finite(2)), ast::seg(mk, Ord::finite(3)),
                            ast::inv(ast::seg(mk, Ord::finite(3))), ast::seg(mk, Ord::finite(1))});
  Word w = reduce(messy, s);
  CHECK(phi_eval(messy, fam, s) == phi_eval(w, fam, s));
  CHECK(phi_eval(to_term(w), fam, s) == phi_eval(w, fam, s));
}

TEST_CASE("report serialization formats") {
  Session s;
  Atom k = s.atoms.k1();
  OccReport r = class_count(reduce(build_M_kappa(s, k), s), PatternFamily::canonical(k), s);
  std::string lines = occ_report_lines(r);
  CHECK(lines.find("plus=1\n") == 0);
  CHECK(lines.find("minus=0\n") != std::string::npos);
  CHECK(lines.find("occ sign=+") != std::string::npos);
  std::string j = occ_report_json(r);
  CHECK(j.find("\"plus\":1") != std::string::npos);

  WitnessReport w = specker_witness(std::vector<Ord>{Ord::finite(0)}, k, s);
  CHECK(witness_lines(w, s) == "beta=1 restriction=eps phi=1\n");
  CHECK(witness_json(w, s).find("\"ok\":true") != std::string::npos);
}
