#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "butterfly/model.hpp"

using namespace butterfly;

namespace {

std::vector<Symbol> parse_word(std::initializer_list<const char*> items) {
    std::vector<Symbol> out;
    for (const char* s : items) out.push_back(parse_symbol(s));
    return out;
}

using Edge = std::pair<std::string, std::string>;

std::set<Edge> edges_of(const TransitionGraph& g) {
    std::set<Edge> out;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            if (g.allows(a, b)) out.insert({to_string(g.symbol(a)), to_string(g.symbol(b))});
    return out;
}

std::set<Edge> expected_edges(int L, bool primed) {
    std::vector<std::string> one_family{"1"};
    for (int i = 1; i <= L; ++i) one_family.push_back("1_" + std::to_string(i));
    std::set<Edge> e;
    for (const auto& a : one_family)
        for (const auto& b : one_family) e.insert({a, b});
    e.insert({"1", "2"});
    for (const char* b : {"1", "2", "3"}) e.insert({"2", b});
    for (const char* b : {"2", "3", "4"}) e.insert({"3", b});
    for (const char* b : {"3", "4"}) e.insert({"4", b});
    if (primed) {
        e.insert({"2", "3'"});
        for (const char* b : {"2", "3'", "4'"}) e.insert({"3'", b});
        for (const char* b : {"3'", "4'"}) e.insert({"4'", b});
    }
    return e;
}

// Random admissible word of the given length starting at `start`.
std::vector<Symbol> random_walk(const TransitionGraph& g, std::size_t start, int len, std::mt19937_64& rng) {
    std::vector<Symbol> w{g.symbol(start)};
    std::size_t cur = start;
    for (int i = 1; i < len; ++i) {
        const auto& next = g.successors(cur);
        cur = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
        w.push_back(g.symbol(cur));
    }
    return w;
}

Symbol mirror(const Symbol& s) {
    switch (s.letter) {
        case Letter::three: return Symbol::three_prime();
        case Letter::four: return Symbol::four_prime();
        case Letter::three_prime: return Symbol::three();
        case Letter::four_prime: return Symbol::four();
        default: return s;
    }
}

}  // namespace

TEST_CASE("parameters are validated") {
    CHECK_NOTHROW(ModelParams::reference().validate());
    for (auto field : {&ModelParams::alpha, &ModelParams::gamma, &ModelParams::delta, &ModelParams::epsilon}) {
        auto p = ModelParams::reference();
        p.*field = 0.0;
        CHECK_THROWS_AS(p.validate(), PreconditionError);
        p.*field = -1.0;
        CHECK_THROWS_AS(p.validate(), PreconditionError);
    }
    auto p = ModelParams::reference();
    p.L = 0;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
}

TEST_CASE("symbols print and parse") {
    for (const char* s : {"1", "1_1", "1_7", "2", "3", "4", "3'", "4'"}) CHECK(to_string(parse_symbol(s)) == s);
    CHECK_THROWS_AS(parse_symbol("5"), PreconditionError);
    CHECK_THROWS_AS(parse_symbol("1_0"), PreconditionError);
}

TEST_CASE("edge sets of both variants") {
    for (int L : {1, 2, 4}) {
        ModelParams p;
        p.L = L;
        CHECK(edges_of(TransitionGraph::butterfly(p)) == expected_edges(L, false));
        p.variant = Variant::B;
        const auto g = TransitionGraph::butterfly(p);
        CHECK(edges_of(g) == expected_edges(L, true));
        CHECK(g.size() == static_cast<std::size_t>(L) + 6);
    }
}

TEST_CASE("graphs are irreducible") {
    for (auto v : {Variant::A, Variant::B})
        for (int L : {1, 3}) {
            ModelParams p;
            p.variant = v;
            p.L = L;
            CHECK(TransitionGraph::butterfly(p).is_irreducible());
        }
    const auto g = TransitionGraph::butterfly(ModelParams::reference());
    CHECK_FALSE(g.restricted([](const Symbol& s) { return !s.is_two(); }).is_irreducible());
}

TEST_CASE("admissibility") {
    const auto g = TransitionGraph::butterfly(ModelParams::reference());
    CHECK(is_admissible(g, parse_word({"3", "2", "1"})));
    CHECK_FALSE(is_admissible(g, parse_word({"4", "2"})));
    CHECK_FALSE(is_admissible(g, parse_word({"3", "1"})));
    CHECK(is_admissible(g, parse_word({"1", "1_1", "1", "2", "3", "4", "4", "3", "2", "2"})));
    CHECK_FALSE(is_admissible(g, parse_word({"1_1", "2"})));
    CHECK_FALSE(is_admissible(g, parse_word({"2", "3'"})));
}

TEST_CASE("2-run potential telescopes to -log(n+1)") {
    const auto p = ModelParams::reference();
    for (int n = 1; n <= 60; ++n) {
        Word w{std::vector<Symbol>(static_cast<std::size_t>(n), Symbol::two()), Continuation::into_one};
        w.symbols.push_back(Symbol::one());
        double run = 0.0;
        for (int i = 0; i < n; ++i) run += phi_at(p, w, static_cast<std::size_t>(i));
        CHECK(run == doctest::Approx(-std::log(n + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("fixed point 2,2,2,... has zero potential") {
    const auto p = ModelParams::reference();
    const Word w{std::vector<Symbol>(5, Symbol::two()), Continuation::all_twos};
    for (std::size_t i = 0; i < w.length(); ++i) CHECK(phi_at(p, w, i) == 0.0);
}

TEST_CASE("wing symbols that never meet a 2") {
    ModelParams p;
    p.gamma = 0.3;
    p.delta = 1.7;
    const Word w{parse_word({"3", "4", "3"}), Continuation::stay_in_wing};
    CHECK(phi_at(p, w, 0) == doctest::Approx(0.3));
    CHECK(phi_at(p, w, 1) == doctest::Approx(2.0));
    CHECK(phi_at(p, w, 2) == doctest::Approx(0.3));
}

TEST_CASE("wing corrections telescope to -eps*log(m+1)") {
    ModelParams p;
    p.epsilon = 1.3;
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 25; ++m) {
        Word w;
        w.symbols.push_back(Symbol::three());
        for (int i = 1; i < m - 1; ++i) w.symbols.push_back(rng() % 2 ? Symbol::three() : Symbol::four());
        if (m > 1) w.symbols.push_back(Symbol::three());
        w.symbols.push_back(Symbol::two());
        w.continuation = Continuation::into_one;
        double corr = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto& s = w.symbols[static_cast<std::size_t>(i)];
            const double base = s.is_outer_wing() ? p.gamma + p.delta : p.gamma;
            corr += phi_at(p, w, static_cast<std::size_t>(i)) - base;
        }
        CHECK(corr == doctest::Approx(-p.epsilon * std::log(m + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("weights of short return words") {
    ModelParams p;
    p.alpha = 0.7;
    const double beta = 1.3, z = 0.4;
    const Word one{parse_word({"1"}), Continuation::into_one};
    CHECK(birkhoff_weight(p, one, beta, z) == doctest::Approx(std::exp(-p.alpha * beta - z)));
    const Word one_two{parse_word({"1", "2"}), Continuation::into_one};
    CHECK(birkhoff_weight(p, one_two, beta, z) ==
          doctest::Approx(std::exp(-p.alpha * beta) * std::pow(2.0, -beta) * std::exp(-2 * z)));
    const Word one_aux{parse_word({"1", "1_1"}), Continuation::into_one};
    CHECK(birkhoff_weight(p, one_aux, beta, z) == doctest::Approx(std::exp(-2 * p.alpha * beta - 2 * z)));
}

TEST_CASE("words that cannot be evaluated are rejected") {
    const auto p = ModelParams::reference();
    const auto g = TransitionGraph::butterfly(p);
    const Word bad_edge{parse_word({"4", "2"}), Continuation::into_one};
    CHECK_THROWS_AS(bad_edge.validate(g), PreconditionError);
    const Word bad_continuation{parse_word({"3"}), Continuation::into_one};
    CHECK_THROWS_AS(phi_at(p, bad_continuation, 0), PreconditionError);
    const Word primed_in_a{parse_word({"2", "3'"}), Continuation::stay_in_wing};
    CHECK_THROWS_AS(primed_in_a.validate(g), PreconditionError);
    CHECK_NOTHROW(Word{parse_word({"3", "2"}), Continuation::into_one}.validate(g));
    const Word ok{parse_word({"2"}), Continuation::into_one};
    CHECK_THROWS_AS(phi_at(p, ok, 1), PreconditionError);
}

TEST_CASE("mirror symmetry of variant B") {
    ModelParams p;
    p.variant = Variant::B;
    p.L = 2;
    const auto g = TransitionGraph::butterfly(p);
    const auto start = *g.index_of(Symbol::two());
    std::mt19937_64 rng(5);
    int with_primes = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto w = random_walk(g, start, 3 + static_cast<int>(rng() % 20), rng);
        // Finish with 2,1 so every wing block is closed.
        while (!w.back().is_two() && !w.back().in_one_family()) {
            const auto& s = w.back();
            w.push_back(s.is_outer_wing() ? (s.is_primed() ? Symbol::three_prime() : Symbol::three())
                                          : Symbol::two());
        }
        if (w.back().in_one_family()) continue;
        std::vector<Symbol> m;
        for (const auto& s : w) m.push_back(mirror(s));
        REQUIRE(is_admissible(g, w));
        REQUIRE(is_admissible(g, m));
        for (const auto& s : w) with_primes += s.is_primed();
        const Word a{w, Continuation::into_one}, b{m, Continuation::into_one};
        CHECK(birkhoff_weight(p, a, 0.8, 1.1) == doctest::Approx(birkhoff_weight(p, b, 0.8, 1.1)).epsilon(1e-14));
    }
    CHECK(with_primes > 0);
}
