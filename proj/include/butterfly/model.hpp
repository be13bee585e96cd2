#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace butterfly {

/// Raised when a caller breaks a documented precondition (bad parameters,
/// inadmissible words, potentials that need lookahead the word cannot give).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A: single wing {3,4}.  B: adds the mirror wing {3',4'} entered from 2.
enum class Variant { A, B };

struct ModelParams {
    double alpha = 1.0;
    double gamma = 0.5;
    double delta = 1.0;
    double epsilon = 1.0;
    int L = 1;
    Variant variant = Variant::A;

    void validate() const;
    /// Number of wings attached to the 2-string (1 for A, 2 for B).
    int wing_count() const { return variant == Variant::A ? 1 : 2; }

    static ModelParams reference() { return {}; }
};

enum class Letter : std::uint8_t { one, one_aux, two, three, four, three_prime, four_prime };

struct Symbol {
    Letter letter = Letter::one;
    int aux = 0;  // 1..L for Letter::one_aux, otherwise 0

    static Symbol one() { return {Letter::one, 0}; }
    static Symbol one_aux(int i) { return {Letter::one_aux, i}; }
    static Symbol two() { return {Letter::two, 0}; }
    static Symbol three() { return {Letter::three, 0}; }
    static Symbol four() { return {Letter::four, 0}; }
    static Symbol three_prime() { return {Letter::three_prime, 0}; }
    static Symbol four_prime() { return {Letter::four_prime, 0}; }

    bool in_one_family() const { return letter == Letter::one || letter == Letter::one_aux; }
    bool is_two() const { return letter == Letter::two; }
    bool is_wing() const {
        return letter == Letter::three || letter == Letter::four || letter == Letter::three_prime ||
               letter == Letter::four_prime;
    }
    bool is_primed() const { return letter == Letter::three_prime || letter == Letter::four_prime; }
    /// The "4" letters carry the extra delta.
    bool is_outer_wing() const { return letter == Letter::four || letter == Letter::four_prime; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

std::string to_string(const Symbol& s);
/// Parses "1", "1_3", "2", "3", "4", "3'", "4'".
Symbol parse_symbol(const std::string& text);

class TransitionGraph {
public:
    static TransitionGraph butterfly(const ModelParams& params);

    std::size_t size() const { return symbols_.size(); }
    const Symbol& symbol(std::size_t i) const { return symbols_.at(i); }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::optional<std::size_t> index_of(const Symbol& s) const;

    bool allows(std::size_t from, std::size_t to) const { return adjacency_[from * size() + to] != 0; }
    bool allows(const Symbol& from, const Symbol& to) const;
    const std::vector<std::size_t>& successors(std::size_t i) const { return successors_.at(i); }

    /// Adds an edge; used by tests and the CLI to build deliberately wrong graphs.
    void add_edge(const Symbol& from, const Symbol& to);
    bool is_irreducible() const;

    /// Subgraph on the symbols for which keep(symbol) holds.
    template <class Pred>
    TransitionGraph restricted(Pred keep) const {
        TransitionGraph g;
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < size(); ++i)
            if (keep(symbols_[i])) kept.push_back(i);
        g.symbols_.reserve(kept.size());
        for (auto i : kept) g.symbols_.push_back(symbols_[i]);
        g.adjacency_.assign(kept.size() * kept.size(), 0);
        for (std::size_t a = 0; a < kept.size(); ++a)
            for (std::size_t b = 0; b < kept.size(); ++b)
                g.adjacency_[a * kept.size() + b] = adjacency_[kept[a] * size() + kept[b]];
        g.rebuild_successors();
        return g;
    }

private:
    void rebuild_successors();

    std::vector<Symbol> symbols_;
    std::vector<std::uint8_t> adjacency_;
    std::vector<std::vector<std::size_t>> successors_;
};

bool is_admissible(const TransitionGraph& graph, std::span<const Symbol> word);

/// What follows the last symbol of a finite word.  The potential looks ahead,
/// so finite words need this to be evaluated.
enum class Continuation {
    into_one,        // next symbol is 1
    into_three_two,  // next symbols are 3, 2
    all_twos,        // 2, 2, 2, ... forever
    stay_in_wing,    // never sees a 2 again
};

struct Word {
    std::vector<Symbol> symbols;
    Continuation continuation = Continuation::into_one;

    std::size_t length() const { return symbols.size(); }
    /// Throws unless the word is admissible and the continuation can follow its last symbol.
    void validate(const TransitionGraph& graph) const;
};

/// Potential of a 2 whose remaining 2-run (itself included) has length k; k = 0 means infinite.
double two_potential(int k);
/// Potential of a wing symbol at distance d from the next 2; d = 0 means it never comes.
double wing_potential(const ModelParams& params, Letter letter, int d);

double phi_at(const ModelParams& params, const Word& word, std::size_t pos);
double birkhoff_sum(const ModelParams& params, const Word& word);
/// exp(beta * S_tau phi - z * tau)
double birkhoff_weight(const ModelParams& params, const Word& word, double beta, double z);

}  // namespace butterfly
