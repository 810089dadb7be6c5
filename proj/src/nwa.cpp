#include "nwa/nwa.hpp"

#include "nwa/errors.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace nwa {

const Slave& Nwa::slave(int index) const {
    auto it = slaves.find(index);
    if (it == slaves.end())
        throw input_error("slave " + std::to_string(index) + " is not declared");
    return it->second;
}

int Nwa::slave_state_total() const {
    int n = 0;
    for (const auto& [j, s] : slaves)
        n += s.core.state_count();
    return n;
}

int Nwa::max_slave_states() const {
    int n = 0;
    for (const auto& [j, s] : slaves)
        n = std::max(n, s.core.state_count());
    return n;
}

std::int64_t Nwa::max_weight() const {
    std::int64_t m = 0;
    for (const auto& [j, s] : slaves)
        m = std::max(m, s.core.max_abs_label());
    return m;
}

bool Nwa::has_backward() const {
    return std::any_of(slaves.begin(), slaves.end(), [](const auto& p) { return p.first < 0; });
}

bool Nwa::has_forward() const {
    return std::any_of(slaves.begin(), slaves.end(), [](const auto& p) { return p.first > 0; });
}

ValidationReport validate(const Nwa& nwa) {
    ValidationReport r;
    const int letters = nwa.alphabet.size();
    if (letters == 0)
        throw input_error("alphabet is empty");
    r.items.push_back({"alphabet", true, std::to_string(letters) + " letters"});

    nwa.master.check_structure(letters, "master");
    for (const auto& t : nwa.master.transitions)
        if (!nwa.has_slave(static_cast<int>(t.label)))
            throw input_error("master transition " + nwa.master.states[t.source] + " -" +
                              nwa.alphabet.name(t.letter) + "-> " + nwa.master.states[t.target] +
                              " invokes undeclared slave " + std::to_string(t.label));
    r.items.push_back({"label-range", true, "all master labels name declared slaves"});

    for (const auto& [j, s] : nwa.slaves) {
        std::string what = "slave " + std::to_string(j);
        if (j == 0)
            throw input_error("slave 0 is the implicit dummy and cannot be declared");
        if (s.index != j)
            throw input_error(what + ": index mismatch");
        s.core.check_structure(letters, what);
        if (j > 0 && s.core.has_at_start())
            throw input_error(what + ": atstart states are only meaningful for backward slaves");
    }
    r.items.push_back({"dummy-slave", true, "slave 0 is silent"});

    bool det = nwa.master.is_deterministic();
    r.items.push_back({"master-deterministic", det,
                       det ? "" : (nwa.master.single_initial() ? "two transitions share (state, letter)"
                                                               : "initial set is not a singleton")});
    for (const auto& [j, s] : nwa.slaves) {
        bool functional = s.core.is_deterministic();
        bool final = s.core.accepting_is_final();
        std::string detail;
        if (!functional)
            detail = s.core.single_initial() ? "two transitions share (state, letter)" : "initial set is not a singleton";
        else if (!final)
            detail = "an accepting state has outgoing transitions";
        r.items.push_back({"slave " + std::to_string(j) + "-deterministic", functional && final, detail});
        det = det && functional && final;
    }
    r.deterministic = det;
    return r;
}

bool is_deterministic(const Nwa& nwa) { return validate(nwa).deterministic; }

void require_deterministic(const Nwa& nwa, const std::string& what) {
    if (!is_deterministic(nwa))
        throw input_error(what + " requires a deterministic NWA (run determinize first)");
}

int LassoWord::at(long long position) const {
    if (position < 1)
        throw std::out_of_range("lasso position must be >= 1");
    if (position <= prefix_length())
        return prefix[position - 1];
    return period[(position - 1 - prefix_length()) % period_length()];
}

std::optional<std::int64_t> letter_integer(std::string_view name) {
    if (name.empty())
        return std::nullopt;
    std::string_view digits = name;
    bool negative = false;
    if (digits.front() == '+' || digits.front() == '-') {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size())
        return std::nullopt;
    return negative ? -v : v;
}

namespace {

int resolve_letter(const std::string& token, const Alphabet& alphabet) {
    int id = alphabet.find(token);
    if (id >= 0)
        return id;
    if (auto v = letter_integer(token))
        for (int i = 0; i < alphabet.size(); ++i)
            if (letter_integer(alphabet.name(i)) == v)
                return i;
    throw input_error("letter '" + token + "' not in alphabet");
}

}  // namespace

LassoWord parse_lasso(std::string_view text, const Alphabet& alphabet) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos)
        throw input_error("lasso word needs '|' between prefix and period: \"" + std::string(text) + "\"");
    if (text.find('|', bar + 1) != std::string_view::npos)
        throw input_error("lasso word has more than one '|'");
    LassoWord w;
    auto fill = [&](std::string_view part, std::vector<int>& into) {
        std::istringstream in{std::string(part)};
        std::string tok;
        while (in >> tok)
            into.push_back(resolve_letter(tok, alphabet));
    };
    fill(text.substr(0, bar), w.prefix);
    fill(text.substr(bar + 1), w.period);
    if (w.period.empty())
        throw input_error("lasso period is empty");
    return w;
}

std::string format_lasso(const LassoWord& w, const Alphabet& alphabet) {
    std::string s;
    for (int a : w.prefix)
        s += alphabet.name(a) + " ";
    s += "|";
    for (int a : w.period)
        s += " " + alphabet.name(a);
    return s;
}

LassoWord canonical_lasso(LassoWord w) {
    if (w.period.empty())
        return w;
    while (!w.prefix.empty() && w.prefix.back() == w.period.back()) {
        std::rotate(w.period.rbegin(), w.period.rbegin() + 1, w.period.rend());
        w.prefix.pop_back();
    }
    const std::size_t n = w.period.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d)
            continue;
        bool repeats = true;
        for (std::size_t k = d; k < n && repeats; ++k)
            repeats = w.period[k] == w.period[k - d];
        if (repeats) {
            w.period.resize(d);
            break;
        }
    }
    return w;
}

}  // namespace nwa
