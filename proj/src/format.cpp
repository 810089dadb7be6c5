#include "nwa/format.hpp"

#include "nwa/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nwa {

namespace {

bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '$' ||
           c == '.';
}

bool letter_char(char c) { return name_char(c) || c == '#' || c == '+' || c == '-' || c == '@'; }

bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Nwa parse() {
        Nwa nwa;
        expect_keyword("nwa");
        nwa.name = quoted();
        expect('{');
        bool have_master = false;
        for (skip(); peek() != '}'; skip()) {
            if (at_end())
                fail("unexpected end of input, expected '}'");
            std::size_t at = pos_;
            std::string kw = name();
            if (kw == "alphabet") {
                if (nwa.alphabet.size() > 0)
                    fail_at(at, "alphabet declared twice");
                for (;;) {
                    std::size_t lat = (skip(), pos_);
                    std::string letter = run(letter_char, "letter");
                    try {
                        nwa.alphabet.add(letter);
                    } catch (const input_error& e) {
                        fail_at(lat, e.what());
                    }
                    if (!accept(','))
                        break;
                }
                expect(';');
            } else if (kw == "width") {
                nwa.declared_width = static_cast<int>(integer());
                if (*nwa.declared_width < 1)
                    fail_at(at, "width must be >= 1");
                expect(';');
            } else if (kw == "master") {
                if (have_master)
                    fail_at(at, "master declared twice");
                require_alphabet(nwa, at);
                have_master = true;
                body(nwa.master, nwa.alphabet, true);
            } else if (kw == "slave") {
                require_alphabet(nwa, at);
                std::size_t iat = (skip(), pos_);
                Slave s;
                s.index = static_cast<int>(integer());
                if (s.index == 0)
                    fail_at(iat, "slave 0 is the implicit dummy and cannot be declared");
                if (nwa.slaves.count(s.index))
                    fail_at(iat, "duplicate slave " + std::to_string(s.index));
                std::size_t dat = (skip(), pos_);
                std::string dir = name();
                if (dir != "forward" && dir != "backward")
                    fail_at(dat, "expected 'forward' or 'backward'");
                if ((dir == "forward") != (s.index > 0))
                    fail_at(dat, "slave " + std::to_string(s.index) + " must be " +
                                     (s.index > 0 ? "forward" : "backward") + " (sign encodes direction)");
                s.fn = value_function();
                body(s.core, nwa.alphabet, false);
                nwa.slaves.emplace(s.index, std::move(s));
            } else {
                fail_at(at, "unknown declaration '" + kw + "'");
            }
        }
        expect('}');
        skip();
        if (!at_end())
            fail("trailing content after closing '}'");
        if (!have_master)
            fail("missing master declaration");
        return nwa;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw input_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

    void skip() {
        while (!at_end()) {
            char c = text_[pos_];
            if (space(c)) {
                ++pos_;
            } else if (c == '#' && (pos_ + 1 >= text_.size() || space(text_[pos_ + 1]))) {
                while (!at_end() && text_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    bool accept(char c) {
        skip();
        if (peek() != c)
            return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'" + (at_end() ? " before end of input" : ""));
    }

    template <class Pred>
    std::string run(Pred pred, const char* what) {
        skip();
        std::size_t start = pos_;
        while (!at_end() && pred(text_[pos_]))
            ++pos_;
        if (start == pos_)
            fail(std::string("expected ") + what);
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string name() { return run(name_char, "identifier"); }

    void expect_keyword(const std::string& kw) {
        skip();
        std::size_t at = pos_;
        if (name() != kw)
            fail_at(at, "expected '" + kw + "'");
    }

    std::string quoted() {
        expect('"');
        std::size_t start = pos_;
        while (!at_end() && text_[pos_] != '"' && text_[pos_] != '\n')
            ++pos_;
        if (peek() != '"')
            fail("unterminated string");
        std::string s(text_.substr(start, pos_ - start));
        ++pos_;
        return s;
    }

    std::int64_t integer() {
        skip();
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+')
            ++pos_;
        std::size_t digits = pos_;
        while (!at_end() && text_[pos_] >= '0' && text_[pos_] <= '9')
            ++pos_;
        if (digits == pos_)
            fail_at(start, "expected integer");
        if (pos_ - digits > 15)
            fail_at(start, "integer out of range");
        std::string s(text_.substr(start, pos_ - start));
        return std::stoll(s);
    }

    ValueFunction value_function() {
        skip();
        std::size_t at = pos_;
        std::string kw = name();
        if (kw == "min")
            return ValueFunction::min();
        if (kw == "max")
            return ValueFunction::max();
        if (kw == "sum")
            return ValueFunction::sum();
        if (kw == "sumplus")
            return ValueFunction::sumplus();
        if (kw == "bsum") {
            expect('(');
            std::int64_t lo = integer();
            expect(',');
            std::int64_t hi = integer();
            expect(')');
            try {
                return ValueFunction::bsum(lo, hi);
            } catch (const input_error& e) {
                fail_at(at, e.what());
            }
        }
        fail_at(at, "unknown value function '" + kw + "'");
    }

    void require_alphabet(const Nwa& nwa, std::size_t at) const {
        if (nwa.alphabet.size() == 0)
            fail_at(at, "alphabet must be declared before automata");
    }

    std::vector<int> state_list(const Automaton& a) {
        std::vector<int> ids;
        skip();
        if (peek() == ';')
            return ids;
        for (;;) {
            std::size_t at = (skip(), pos_);
            std::string n = name();
            int q = a.find_state(n);
            if (q < 0)
                fail_at(at, "undeclared state '" + n + "'");
            ids.push_back(q);
            if (!accept(','))
                break;
        }
        return ids;
    }

    void body(Automaton& a, const Alphabet& alphabet, bool master) {
        expect('{');
        for (skip(); peek() != '}'; skip()) {
            if (at_end())
                fail("unexpected end of input, expected '}'");
            std::size_t at = pos_;
            std::string word = name();
            skip();
            if (peek() == '-') {
                transition(a, alphabet, master, word, at);
                continue;
            }
            if (word == "states") {
                for (;;) {
                    std::size_t sat = (skip(), pos_);
                    std::string n = name();
                    if (a.find_state(n) >= 0)
                        fail_at(sat, "duplicate state '" + n + "'");
                    a.add_state(n);
                    if (!accept(','))
                        break;
                }
            } else if (word == "initial") {
                for (int q : state_list(a))
                    if (std::find(a.initial.begin(), a.initial.end(), q) == a.initial.end())
                        a.initial.push_back(q);
            } else if (word == "accepting") {
                for (int q : state_list(a))
                    a.accepting[q] = true;
            } else if (word == "atstart") {
                if (master)
                    fail_at(at, "atstart is only allowed in backward slaves");
                for (int q : state_list(a))
                    a.at_start[q] = true;
            } else {
                fail_at(at, "unknown item '" + word + "'");
            }
            expect(';');
        }
        expect('}');
    }

    void transition(Automaton& a, const Alphabet& alphabet, bool master, const std::string& source,
                    std::size_t at) {
        int src = a.find_state(source);
        if (src < 0)
            fail_at(at, "undeclared state '" + source + "'");
        ++pos_;  // '-'
        std::size_t lat = pos_;
        std::size_t arrow = text_.find("->", pos_);
        if (arrow == std::string_view::npos)
            fail_at(lat, "expected '-<letter>->'");
        std::string letter(text_.substr(pos_, arrow - pos_));
        if (letter.empty() || !std::all_of(letter.begin(), letter.end(), letter_char))
            fail_at(lat, "malformed letter in transition arrow");
        int l = alphabet.find(letter);
        if (l < 0)
            fail_at(lat, "letter '" + letter + "' not in alphabet");
        pos_ = arrow + 2;
        std::size_t tat = (skip(), pos_);
        std::string target = name();
        int dst = a.find_state(target);
        if (dst < 0)
            fail_at(tat, "undeclared state '" + target + "'");
        std::int64_t label;
        if (master) {
            expect_keyword("invoke");
            label = integer();
        } else {
            expect(':');
            label = integer();
        }
        expect(';');
        a.add_transition(src, l, dst, label);
    }
};

void emit_list(std::ostringstream& out, const char* kw, const Automaton& a, const std::vector<bool>& flags) {
    std::vector<std::string> names;
    for (int q = 0; q < a.state_count(); ++q)
        if (flags[q])
            names.push_back(a.states[q]);
    if (names.empty())
        return;
    out << "    " << kw << " ";
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? ", " : "") << names[i];
    out << ";\n";
}

void emit_body(std::ostringstream& out, const Automaton& a, const Alphabet& alphabet, bool master) {
    out << "    states ";
    for (int q = 0; q < a.state_count(); ++q)
        out << (q ? ", " : "") << a.states[q];
    out << ";\n";
    if (!a.initial.empty()) {
        out << "    initial ";
        for (std::size_t i = 0; i < a.initial.size(); ++i)
            out << (i ? ", " : "") << a.states[a.initial[i]];
        out << ";\n";
    }
    emit_list(out, "accepting", a, a.accepting);
    if (!master)
        emit_list(out, "atstart", a, a.at_start);
    for (const auto& t : a.transitions) {
        out << "    " << a.states[t.source] << " -" << alphabet.name(t.letter) << "-> " << a.states[t.target];
        if (master)
            out << " invoke " << t.label << ";\n";
        else
            out << " : " << t.label << ";\n";
    }
}

}  // namespace

Nwa parse_nwa(std::string_view text) { return Parser(text).parse(); }

std::string serialize_nwa(const Nwa& nwa) {
    std::ostringstream out;
    out << "nwa \"" << nwa.name << "\" {\n";
    out << "  alphabet ";
    for (int i = 0; i < nwa.alphabet.size(); ++i)
        out << (i ? ", " : "") << nwa.alphabet.name(i);
    out << ";\n";
    if (nwa.declared_width)
        out << "  width " << *nwa.declared_width << ";\n";
    out << "  master {\n";
    emit_body(out, nwa.master, nwa.alphabet, true);
    out << "  }\n";
    for (const auto& [j, s] : nwa.slaves) {
        out << "  slave " << j << (j > 0 ? " forward " : " backward ") << s.fn.keyword() << " {\n";
        emit_body(out, s.core, nwa.alphabet, false);
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw input_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace nwa
