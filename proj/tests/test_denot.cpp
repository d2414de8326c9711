#include "support.hpp"

#include <gtest/gtest.h>

using namespace ppcf;

namespace {

using R = Rational;
using G = GroundVec<R>;

const Type nat = Type::nat();

EvalConfig small(std::size_t n = 8, std::size_t k = 30) {
  EvalConfig c;
  c.nat_trunc = n;
  c.fix_iters = k;
  return c;
}

G vec(std::initializer_list<R> xs, std::size_t n) {
  G v(xs);
  v.resize(n, R(0));
  return v;
}

R q(long p, long r) {
  R x(p, r);
  x.canonicalize();
  return x;
}

R total(const G& v) {
  R t = 0;
  for (const auto& x : v) t += x;
  return t;
}

}  // namespace

TEST(Denot, Clauses) {
  auto cfg = small();
  EXPECT_EQ(ground_dist<R>(Term::coin(q(1, 2)), cfg), vec({q(1, 2), q(1, 2)}, 8));
  EXPECT_EQ(ground_dist<R>(Term::app(stdlib::pred(), Term::num(2)), cfg), vec({0, 1}, 8));
  for (std::size_t k : {0u, 1u, 50u}) EXPECT_EQ(ground_dist<R>(stdlib::omega(), small(8, k)), G(8, R(0)));
  Term c = Term::coin(q(1, 2));
  EXPECT_EQ(ground_dist<R>(apps(stdlib::add(), {c, c}), cfg), vec({q(1, 4), q(1, 2), q(1, 4)}, 8));
  EXPECT_EQ(ground_dist<R>(Term::num(5), cfg), vec({0, 0, 0, 0, 0, 1}, 8));
  EXPECT_EQ(ground_dist<R>(stdlib::ran({q(1, 3), q(2, 3)}), cfg), vec({q(1, 3), q(2, 3)}, 8));
}

TEST(Denot, UnifIsExactlyUniform) {
  EvalConfig cfg;
  cfg.fix_iters = 50;
  EXPECT_EQ(ground_dist<R>(Term::app(stdlib::unif(), Term::num(3)), cfg), vec({q(1, 4), q(1, 4), q(1, 4), q(1, 4)}, 32));
  // Plain Kleene iteration only approaches it.
  cfg.exact_tail_loops = false;
  auto approx = ground_dist<R>(Term::app(stdlib::unif(), Term::num(3)), cfg);
  EXPECT_LT(approx[0], q(1, 4));
  EXPECT_GT(approx[0], q(1, 4) - q(1, 1000000));
}

TEST(Denot, BottomAndLincomb) {
  auto cfg = small();
  EXPECT_EQ(bottom<R>(nat, cfg).as_ground(8), G(8, R(0)));
  auto bf = bottom<R>(Type::arrow(nat, nat), cfg);
  EXPECT_TRUE(bf(SemValue<R>::ground(vec({1}, 8))).is_zero());

  auto e0 = SemValue<R>::ground(vec({1}, 8)), e1 = SemValue<R>::ground(vec({0, 1}, 8));
  EXPECT_EQ(lincomb<R>({{1, e0}}).vec(), e0.vec());
  EXPECT_EQ(lincomb<R>({{q(1, 2), e0}, {q(1, 2), e1}}).vec(), ground_dist<R>(Term::coin(q(1, 2)), cfg));
  EXPECT_TRUE(lincomb<R>({{0, e0}}).is_zero());

  Evaluator<R> ev(cfg);
  auto pred = ev.eval(stdlib::pred()), succ = ev.eval(lam("x", nat, Term::succ(Term::var("x"))));
  auto mix = lincomb<R>({{q(1, 3), pred}, {q(2, 3), succ}});
  EXPECT_EQ(ev.ground(mix(ev.ground_value(vec({0, 0, 1}, 8)))), vec({0, q(1, 3), 0, q(2, 3)}, 8));
}

TEST(Denot, TruncationDropsMass) {
  auto cfg = small(4, 10);
  Evaluator<R> ev(cfg);
  auto v = ev.ground(ev.eval(Term::succ(Term::succ(Term::succ(Term::coin(q(1, 2)))))));
  EXPECT_EQ(v, vec({0, 0, 0, q(1, 2)}, 4));
  EXPECT_EQ(ev.dropped(), q(1, 2));
  auto rep = denot_report<R>(Term::num(9), cfg);
  EXPECT_EQ(rep.dropped_mass, 1);
  EXPECT_EQ(rep.last_fix_delta, 0);
}

TEST(Denot, LastFixDelta) {
  EvalConfig cfg = small(8, 5);
  cfg.exact_tail_loops = false;
  Term loop = Term::fix(lam("r", nat, ifz(Term::coin(q(1, 2)), Term::num(0), "w", Term::var("r"))));
  auto rep = denot_report<R>(loop, cfg);
  EXPECT_EQ(rep.dist[0], 1 - q(1, 32));
  EXPECT_EQ(rep.last_fix_delta, q(1, 32));
}

TEST(Denot, FloatModeTracksExact) {
  auto cfg = small(16, 40);
  testkit::TermGen gen(41);
  for (int i = 0; i < 40; ++i) {
    Term m = gen.closed_nat();
    auto e = ground_dist<R>(m, cfg);
    auto f = ground_dist<double>(m, cfg);
    for (std::size_t j = 0; j < e.size(); ++j) EXPECT_NEAR(e[j].get_d(), f[j], 1e-9);
  }
}

TEST(Denot, SubProbabilityAndMonotonicity) {
  testkit::GenConfig gc;
  gc.allow_omega = true;
  testkit::TermGen gen(43, gc);
  for (int i = 0; i < 80; ++i) {
    Term m = gen.closed_nat();
    auto lo = ground_dist<R>(m, small(6, 3));
    auto hi = ground_dist<R>(m, small(12, 20));
    EXPECT_LE(total(hi), 1);
    for (std::size_t j = 0; j < lo.size(); ++j) {
      EXPECT_GE(lo[j], 0);
      EXPECT_LE(lo[j], hi[j]) << pretty(m);
    }
  }
}

TEST(Denot, FunctionsAreMonotone) {
  auto cfg = small(8, 20);
  Evaluator<R> ev(cfg);
  testkit::TermGen gen(47);
  for (int i = 0; i < 40; ++i) {
    auto f = ev.eval(gen.closed_fun());
    G u = vec({q(1, 8), q(1, 4)}, 8), v = vec({q(1, 4), q(1, 4), q(1, 8)}, 8);
    auto fu = ev.ground(f(ev.ground_value(u))), fv = ev.ground(f(ev.ground_value(v)));
    for (std::size_t j = 0; j < 8; ++j) EXPECT_LE(fu[j], fv[j]);
  }
}

TEST(Denot, SemanticSubstitution) {
  auto cfg = small(10, 20);
  testkit::TermGen gen(53);
  for (int i = 0; i < 80; ++i) {
    Term f = gen.closed_fun();
    if (!f.is(Kind::Abs)) continue;
    Term body = open(f.body(), Term::var("x"));
    Term p = gen.closed_nat();
    Evaluator<R> ev(cfg);
    auto lhs = ev.ground(ev.eval(subst(body, p, "x")));
    auto rhs = ev.ground(ev.eval(body, Env<R>().bind("x", ev.eval(p))));
    EXPECT_EQ(lhs, rhs) << pretty(body) << " with x = " << pretty(p);
  }
}

TEST(Denot, Invariance) {
  auto cfg = small(16, 40);
  auto coin = check_invariance(Term::coin(q(1, 2)), cfg);
  EXPECT_TRUE(coin.holds());
  EXPECT_EQ(coin.after, vec({q(1, 2), q(1, 2)}, 16));
  EXPECT_TRUE(check_invariance(Term::num(3), cfg).holds());
  Term t = ifz(Term::coin(q(1, 3)), Term::num(0), "z", Term::succ(Term::var("z")));
  auto r = check_invariance(t, cfg);
  EXPECT_TRUE(r.holds());
  EXPECT_EQ(r.before, vec({q(1, 3), q(2, 3)}, 16));

  testkit::TermGen gen(59);
  for (int i = 0; i < 100; ++i) {
    Term m = gen.closed_nat();
    EXPECT_TRUE(check_invariance(m, cfg).holds()) << pretty(m);
  }
}

TEST(Denot, SoundnessInequality) {
  EvalConfig cfg;
  cfg.fix_iters = 100;
  for (const Term& m : {Term::app(stdlib::unif(), Term::num(2)), apps(stdlib::add(), {Term::coin(q(1, 2)), Term::num(3)}),
                        Term::app(stdlib::unift(), Term::num(3))}) {
    auto rep = denot_report<R>(m, cfg);
    Explorer ex(m);
    for (std::size_t k = 0; k <= 200; k += 20) {
      ex.advance_to(k);
      for (std::size_t n = 0; n < cfg.nat_trunc; ++n) EXPECT_LE(ex.mass_of(Term::num(n)), rep.dist[n] + rep.dropped_mass);
    }
  }
}

TEST(Denot, ClosedForms) {
  EvalConfig cfg = small(12, 60);
  const G u = vec({q(1, 4), q(1, 4), q(1, 2)}, 12);
  const G v = vec({q(1, 3), 0, q(1, 6), q(1, 2)}, 12);
  const G w = vec({q(1, 8), q(1, 8), 0, q(1, 4)}, 12);

  auto pred = closed_form_check("pred", {{u}, {v}}, cfg);
  EXPECT_EQ(pred.mismatches(), 0u);
  EXPECT_EQ(pred.cases[0].expected, vec({q(1, 2), q(1, 2)}, 12));

  EXPECT_EQ(closed_form_check("add", {{u, v}, {w, u}}, cfg).mismatches(), 0u);
  EXPECT_EQ(closed_form_check("exp", {{u}, {w}}, cfg).mismatches(), 0u);
  EXPECT_EQ(closed_form_check("shift", {{u}, {v}}, cfg, 3).mismatches(), 0u);
  EXPECT_EQ(closed_form_check("cmp", {{u, v}, {w, v}, {v, w}}, cfg).mismatches(), 0u);
  auto probe = closed_form_check("probe", {{u}}, cfg, 2);
  EXPECT_EQ(probe.mismatches(), 0u);
  EXPECT_EQ(probe.cases[0].evaluated, vec({q(1, 2)}, 12));
  EXPECT_EQ(closed_form_check("pprod", {{u, v, w}}, cfg, 3).mismatches(), 0u);
  EXPECT_EQ(closed_form_check("pchoose", {{u, v, w, u}, {w, u, v, v}}, cfg, 3).mismatches(), 0u);
  auto zero = closed_form_check("pchoose", {{G(12, R(0)), u, v}}, cfg, 2);
  EXPECT_EQ(zero.cases[0].evaluated, G(12, R(0)));
  EXPECT_EQ(closed_form_check("unif", {{u}, {v}, {w}}, cfg).mismatches(), 0u);
  EXPECT_EQ(closed_form_check("ran", {{vec({q(1, 2), q(1, 4), q(1, 4)}, 12)}}, cfg).mismatches(), 0u);
  EXPECT_THROW(closed_form_check("add", {{u}}, cfg), std::invalid_argument);
}

TEST(Denot, InequationalFailureFacts) {
  Term m1 = parse("\\x:nat. if x then 0 else [z] fix (\\y:nat. y)");
  Term m2 = parse("\\x:nat. if x then (if x then 0 else [z] fix (\\y:nat. y)) else [z] fix (\\y:nat. y)");
  auto cfg = small(4, 10);
  Evaluator<R> ev(cfg);
  auto f1 = ev.eval(m1), f2 = ev.eval(m2);
  for (long i = 0; i <= 9; ++i) {
    G u = vec({q(i, 9), q(9 - i, 18)}, 4);
    R a = ev.ground(f1(ev.ground_value(u)))[0], b = ev.ground(f2(ev.ground_value(u)))[0];
    EXPECT_EQ(a, u[0]);
    EXPECT_EQ(b, u[0] * u[0]);
    EXPECT_LE(b, a);
  }
}
