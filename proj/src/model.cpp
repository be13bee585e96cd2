#include "butterfly/model.hpp"

#include <cmath>
#include <string>

namespace butterfly {

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw PreconditionError(std::string(name) + " must be a finite positive number");
    };
    positive(alpha, "alpha");
    positive(gamma, "gamma");
    positive(delta, "delta");
    positive(epsilon, "epsilon");
    if (L < 1) throw PreconditionError("L must be at least 1");
}

std::string to_string(const Symbol& s) {
    switch (s.letter) {
        case Letter::one: return "1";
        case Letter::one_aux: return "1_" + std::to_string(s.aux);
        case Letter::two: return "2";
        case Letter::three: return "3";
        case Letter::four: return "4";
        case Letter::three_prime: return "3'";
        case Letter::four_prime: return "4'";
    }
    return "?";
}

Symbol parse_symbol(const std::string& text) {
    if (text == "1") return Symbol::one();
    if (text == "2") return Symbol::two();
    if (text == "3") return Symbol::three();
    if (text == "4") return Symbol::four();
    if (text == "3'") return Symbol::three_prime();
    if (text == "4'") return Symbol::four_prime();
    if (text.size() > 2 && text.rfind("1_", 0) == 0) {
        std::size_t used = 0;
        int i = std::stoi(text.substr(2), &used);
        if (used == text.size() - 2 && i >= 1) return Symbol::one_aux(i);
    }
    throw PreconditionError("unknown symbol '" + text + "'");
}

TransitionGraph TransitionGraph::butterfly(const ModelParams& params) {
    params.validate();
    TransitionGraph g;
    g.symbols_ = {Symbol::one(), Symbol::two(), Symbol::three(), Symbol::four()};
    if (params.variant == Variant::B) {
        g.symbols_.push_back(Symbol::three_prime());
        g.symbols_.push_back(Symbol::four_prime());
    }
    for (int i = 1; i <= params.L; ++i) g.symbols_.push_back(Symbol::one_aux(i));
    g.adjacency_.assign(g.size() * g.size(), 0);

    auto connect = [&](const Symbol& a, const Symbol& b) {
        g.adjacency_[*g.index_of(a) * g.size() + *g.index_of(b)] = 1;
    };
    const Symbol one = Symbol::one(), two = Symbol::two(), three = Symbol::three(),
                 four = Symbol::four();
    connect(one, one);
    connect(one, two);
    for (int i = 1; i <= params.L; ++i) {
        const Symbol aux = Symbol::one_aux(i);
        connect(one, aux);
        connect(aux, one);
        for (int j = 1; j <= params.L; ++j) connect(aux, Symbol::one_aux(j));
    }
    connect(two, one);
    connect(two, two);
    connect(two, three);
    connect(three, two);
    connect(three, three);
    connect(three, four);
    connect(four, three);
    connect(four, four);
    if (params.variant == Variant::B) {
        const Symbol tp = Symbol::three_prime(), fp = Symbol::four_prime();
        connect(two, tp);
        connect(tp, two);
        connect(tp, tp);
        connect(tp, fp);
        connect(fp, tp);
        connect(fp, fp);
    }
    g.rebuild_successors();
    return g;
}

std::optional<std::size_t> TransitionGraph::index_of(const Symbol& s) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == s) return i;
    return std::nullopt;
}

bool TransitionGraph::allows(const Symbol& from, const Symbol& to) const {
    auto a = index_of(from), b = index_of(to);
    return a && b && allows(*a, *b);
}

void TransitionGraph::add_edge(const Symbol& from, const Symbol& to) {
    auto a = index_of(from), b = index_of(to);
    if (!a || !b) throw PreconditionError("edge endpoint not in alphabet");
    adjacency_[*a * size() + *b] = 1;
    rebuild_successors();
}

void TransitionGraph::rebuild_successors() {
    successors_.assign(size(), {});
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b = 0; b < size(); ++b)
            if (allows(a, b)) successors_[a].push_back(b);
}

bool TransitionGraph::is_irreducible() const {
    const std::size_t n = size();
    if (n == 0) return false;
    // Warshall closure on the reachability relation.
    std::vector<std::uint8_t> reach(adjacency_);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k * n + j]) reach[i * n + j] = 1;
    for (auto r : reach)
        if (!r) return false;
    return true;
}

bool is_admissible(const TransitionGraph& graph, std::span<const Symbol> word) {
    for (const auto& s : word)
        if (!graph.index_of(s)) return false;
    for (std::size_t i = 1; i < word.size(); ++i)
        if (!graph.allows(word[i - 1], word[i])) return false;
    return true;
}

void Word::validate(const TransitionGraph& graph) const {
    if (symbols.empty()) throw PreconditionError("empty word");
    if (!is_admissible(graph, symbols)) throw PreconditionError("word is not admissible");
    const Symbol& last = symbols.back();
    bool ok = false;
    switch (continuation) {
        case Continuation::into_one: ok = graph.allows(last, Symbol::one()); break;
        case Continuation::into_three_two: ok = graph.allows(last, Symbol::three()); break;
        case Continuation::all_twos: ok = graph.allows(last, Symbol::two()); break;
        case Continuation::stay_in_wing: ok = last.is_wing(); break;
    }
    if (!ok) throw PreconditionError("continuation cannot follow " + to_string(last));
}

double two_potential(int k) { return k == 0 ? 0.0 : -std::log1p(1.0 / k); }

double wing_potential(const ModelParams& params, Letter letter, int d) {
    const bool outer = letter == Letter::four || letter == Letter::four_prime;
    const double base = outer ? params.gamma + params.delta : params.gamma;
    return d == 0 ? base : base - params.epsilon * std::log1p(1.0 / d);
}

double phi_at(const ModelParams& params, const Word& word, std::size_t pos) {
    const auto& w = word.symbols;
    if (pos >= w.size()) throw PreconditionError("position out of range");
    const Symbol& x = w[pos];
    const int len = static_cast<int>(w.size());
    const int p = static_cast<int>(pos);

    if (x.in_one_family()) return -params.alpha;

    if (x.is_two()) {
        int j = p;
        while (j < len && w[j].is_two()) ++j;
        if (j < len || word.continuation != Continuation::all_twos) return two_potential(j - p);
        return two_potential(0);
    }

    int d = 0;
    for (int j = p + 1; j < len; ++j)
        if (w[j].is_two()) {
            d = j - p;
            break;
        }
    if (d == 0) {
        switch (word.continuation) {
            case Continuation::all_twos: d = len - p; break;
            case Continuation::into_three_two: d = len - p + 1; break;
            case Continuation::stay_in_wing: d = 0; break;
            case Continuation::into_one:
                throw PreconditionError("distance to the next 2 is not determined by the word");
        }
    }
    return wing_potential(params, x.letter, d);
}

double birkhoff_sum(const ModelParams& params, const Word& word) {
    double s = 0.0;
    for (std::size_t i = 0; i < word.length(); ++i) s += phi_at(params, word, i);
    return s;
}

double birkhoff_weight(const ModelParams& params, const Word& word, double beta, double z) {
    return std::exp(beta * birkhoff_sum(params, word) - z * static_cast<double>(word.length()));
}

}  // namespace butterfly
