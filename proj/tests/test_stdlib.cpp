#include "support.hpp"

#include <gtest/gtest.h>

using namespace ppcf;
using namespace ppcf::stdlib;

namespace {

const Type nat = Type::nat();
const Type nat2 = Type::arrow(nat, nat);

Term n(std::uint64_t k) { return Term::num(k); }
Term coin(std::uint64_t p, std::uint64_t q) { return Term::coin(Rational(p, q)); }

// Exact distribution once the frontier is empty.
Distribution run(const Term& m, std::size_t k = 5000) {
  Distribution d = explore(m, k);
  EXPECT_EQ(d.residual, 0) << pretty(m);
  return d;
}

}  // namespace

TEST(Stdlib, Types) {
  EXPECT_EQ(typecheck(omega(nat2)), nat2);
  EXPECT_EQ(typecheck(pred()), nat2);
  EXPECT_EQ(typecheck(add()), nat_power(2));
  EXPECT_EQ(typecheck(shift(3)), nat2);
  EXPECT_EQ(typecheck(exp_()), nat2);
  EXPECT_EQ(typecheck(cmp()), nat_power(2));
  for (std::uint64_t k = 0; k < 4; ++k) {
    EXPECT_EQ(typecheck(probe(k)), nat2);
    EXPECT_EQ(typecheck(pprod(k)), nat_power(k));
    EXPECT_EQ(typecheck(pchoose(k, nat2)), Type::arrow(nat, [&] {
                Type t = nat2;
                for (std::uint64_t i = 0; i < k; ++i) t = Type::arrow(nat2, t);
                return t;
              }()));
    EXPECT_EQ(typecheck(unshift(k)), nat2);
  }
  EXPECT_EQ(typecheck(unift()), nat2);
  EXPECT_EQ(typecheck(unif()), nat2);
  EXPECT_EQ(typecheck(ran({Rational(1, 2), Rational(1, 4)})), nat);
  EXPECT_EQ(typecheck(las_vegas()), Type::arrow(nat2, nat2));
}

TEST(Stdlib, Omega) {
  EXPECT_EQ(explore(omega(), 100).residual, 1);
  EXPECT_TRUE(is_weak_normal(Term::app(omega(nat2), n(0))) == false);
}

TEST(Stdlib, Arithmetic) {
  EXPECT_EQ(run(Term::app(pred(), n(0))).at(0), 1);
  EXPECT_EQ(run(Term::app(pred(), n(3))).at(2), 1);
  EXPECT_EQ(run(apps(add(), {n(2), n(3)})).at(5), 1);
  EXPECT_EQ(run(apps(add(), {n(0), n(0)})).at(0), 1);
  EXPECT_EQ(run(Term::app(shift(2), n(3))).at(5), 1);
  EXPECT_EQ(run(Term::app(exp_(), n(3))).at(8), 1);
  EXPECT_EQ(run(Term::app(exp_(), n(0))).at(1), 1);
}

TEST(Stdlib, Cmp) {
  EXPECT_EQ(run(apps(cmp(), {n(2), n(5)})).at(0), 1);
  EXPECT_EQ(run(apps(cmp(), {n(5), n(2)})).at(1), 1);
  EXPECT_EQ(run(apps(cmp(), {n(2), n(2)})).at(0), 1);
}

TEST(Stdlib, Probe) {
  auto d = explore(Term::app(probe(1), coin(1, 3)), 200);
  EXPECT_EQ(d.at(0), Rational(2, 3));
  EXPECT_EQ(run(Term::app(probe(0), n(0))).at(0), 1);
  EXPECT_EQ(explore(Term::app(probe(2), n(1)), 200).residual, 1);
}

TEST(Stdlib, Pprod) {
  auto d = explore(apps(pprod(2), {coin(1, 2), coin(1, 2)}), 200);
  EXPECT_EQ(d.at(0), Rational(1, 4));
  EXPECT_EQ(pprod(0), n(0));
  EXPECT_EQ(run(Term::app(pprod(1), n(0))).at(0), 1);
}

TEST(Stdlib, Pchoose) {
  EXPECT_EQ(run(apps(pchoose(2, nat), {n(0), n(5), n(7)})).at(5), 1);
  EXPECT_EQ(run(apps(pchoose(2, nat), {n(1), n(5), n(7)})).at(7), 1);
  EXPECT_EQ(explore(apps(pchoose(2, nat), {n(2), n(5), n(7)}), 300).residual, 1);
  EXPECT_EQ(explore(Term::app(pchoose(0, nat), n(0)), 300).residual, 1);
}

TEST(Stdlib, LetIsCallByValue) {
  auto d = run(let_("x", coin(1, 2), apps(add(), {Term::var("x"), Term::var("x")})));
  EXPECT_EQ(d.at(0), Rational(1, 2));
  EXPECT_EQ(d.at(2), Rational(1, 2));
  EXPECT_EQ(d.at(1), 0);
  auto cbn = run(Term::app(lam("x", nat, apps(add(), {Term::var("x"), Term::var("x")})), coin(1, 2)));
  EXPECT_EQ(cbn.at(0), Rational(1, 4));
  EXPECT_EQ(cbn.at(1), Rational(1, 2));
  EXPECT_EQ(cbn.at(2), Rational(1, 4));
  EXPECT_EQ(run(let_("x", n(3), Term::var("x"))).at(3), 1);
}

TEST(Stdlib, Unift) {
  auto d = run(Term::app(unift(), n(2)));
  for (std::uint64_t i = 0; i < 4; ++i) EXPECT_EQ(d.at(i), Rational(1, 4));
  EXPECT_EQ(run(Term::app(unift(), n(0))).at(0), 1);
  // The argument is evaluated once: a coin gives a mixture of unift 0 and unift 1.
  auto m = run(Term::app(unift(), coin(1, 2)));
  EXPECT_EQ(m.at(0), Rational(3, 4));
  EXPECT_EQ(m.at(1), Rational(1, 4));
}

TEST(Stdlib, Unif) {
  auto d = explore(Term::app(unif(), n(3)), 2000);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_LE(d.at(i), Rational(1, 4));
    EXPECT_GE(d.at(i), Rational(1, 4) - Rational(1, 1000));
  }
  EXPECT_EQ(run(Term::app(unif(), n(0))).at(0), 1);
  auto two = explore(Term::app(unif(), n(2)), 500);
  for (std::uint64_t i = 0; i < 3; ++i) EXPECT_GE(two.at(i), Rational(1, 3) - Rational(1, 1000));
}

TEST(Stdlib, Ran) {
  auto d = run(ran({Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
  EXPECT_EQ(d.at(0), Rational(1, 2));
  EXPECT_EQ(d.at(1), Rational(1, 4));
  EXPECT_EQ(d.at(2), Rational(1, 4));
  EXPECT_EQ(ran({Rational(1)}), n(0));
  auto t = explore(ran({Rational(1, 3)}), 100);
  EXPECT_EQ(t.at(0), Rational(1, 3));
  EXPECT_EQ(t.residual, Rational(2, 3));
  EXPECT_EQ(explore(ran({}), 50).residual, 1);
  EXPECT_THROW(ran({Rational(3, 4), Rational(1, 2)}), std::invalid_argument);
  EXPECT_THROW(ran({Rational(-1, 4)}), std::invalid_argument);
}

TEST(Stdlib, LasVegas) {
  // f y = 0 iff y = 2
  Term f = lam("y", nat, ifz(Term::var("y"), n(1), "a", ifz(Term::var("a"), n(1), "b", ifz(Term::var("b"), n(0), "c", n(1)))));
  Term m = apps(las_vegas(), {f, n(3)});
  Rational bound = Rational(1) - Rational(59049, 1048576);  // 1 - (3/4)^10
  // Each round costs about 220 steps with these definitions, so the bound is
  // reached between k = 2000 and k = 3000.
  Explorer ex(m);
  ex.advance_to(2000);
  Rational at2000 = ex.mass_of(n(2));
  EXPECT_GT(at2000, Rational(89, 100));
  ex.advance_to(3000);
  EXPECT_GE(ex.mass_of(n(2)), bound);
  EXPECT_EQ(ex.distribution().mass.size(), 1u);

  Term never = apps(las_vegas(), {lam("y", nat, n(1)), n(3)});
  EXPECT_EQ(explore(never, 600).residual, 1);
}

TEST(Stdlib, Unshift) {
  EXPECT_EQ(run(Term::app(unshift(2), n(5))).at(3), 1);
  EXPECT_EQ(explore(Term::app(unshift(2), n(1)), 100).residual, 1);
  EXPECT_EQ(run(Term::app(unshift(0), n(4))).at(4), 1);
}

TEST(Stdlib, PrintedFormsReparse) {
  for (const auto& name : cli::stdlib_names()) {
    std::vector<std::string> args;
    if (name == "shift" || name == "probe" || name == "pprod" || name == "pchoose" || name == "unshift") args = {"2"};
    if (name == "ran") args = {"1/2", "1/4"};
    Term t = cli::stdlib_term(name, args).term;
    EXPECT_EQ(parse(pretty(t)), t) << name;
  }
}
