#include "bks/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "bks/error.hpp"
#include "bks/format.hpp"

namespace bks {

std::string ParseDiagnostic::str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           (severity == Severity::Error ? "error: " : "warning: ") + message;
}

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, LBracket, RBracket, Comma, Equals, Plus, Minus, Star, Slash, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

// Thrown inside one line; the driver turns it into a diagnostic and moves on.
struct LineError {
    std::string message;
    std::size_t line;
    std::size_t column;
};

constexpr std::size_t kMaxNesting = 64;

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of line";
        case Tok::String: return "string \"" + t.text + "\"";
        default: return "'" + t.text + "'";
    }
}

// Length of a valid UTF-8 sequence starting at s[i], or 0.
std::size_t utf8_length(std::string_view s, std::size_t i) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = 0;
    if (c < 0x80) return 1;
    if ((c & 0xE0) == 0xC0 && c >= 0xC2) n = 2;
    else if ((c & 0xF0) == 0xE0) n = 3;
    else if ((c & 0xF8) == 0xF0 && c <= 0xF4) n = 4;
    else return 0;
    if (i + n > s.size()) return 0;
    for (std::size_t k = 1; k < n; ++k) {
        if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0;
    }
    return n;
}

std::vector<Token> lex_line(std::string_view text, std::size_t line_no, std::vector<ParseDiagnostic>& diags) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto col = [&](std::size_t at) { return at + 1; };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        Token t;
        t.line = line_no;
        t.column = col(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\'')) {
                ++i;
            }
            t.kind = Tok::Ident;
            t.text = std::string(text.substr(start, i - start));
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    i = j;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                }
            }
            t.kind = Tok::Number;
            t.text = std::string(text.substr(start, i - start));
        } else if (c == '"') {
            ++i;
            std::string s;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    s.push_back(text[i + 1]);
                    i += 2;
                    continue;
                }
                if (text[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                s.push_back(text[i++]);
            }
            if (!closed) {
                diags.push_back({Severity::Error, "unterminated string", line_no, col(start)});
                return {};
            }
            t.kind = Tok::String;
            t.text = std::move(s);
        } else {
            ++i;
            t.text = std::string(1, c);
            switch (c) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case '[': t.kind = Tok::LBracket; break;
                case ']': t.kind = Tok::RBracket; break;
                case ',': t.kind = Tok::Comma; break;
                case '=': t.kind = Tok::Equals; break;
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '/': t.kind = Tok::Slash; break;
                default: {
                    std::string shown = std::isprint(static_cast<unsigned char>(c))
                                            ? "'" + std::string(1, c) + "'"
                                            : "byte 0x" + [&] {
                                                  const char* hex = "0123456789abcdef";
                                                  const auto u = static_cast<unsigned char>(c);
                                                  return std::string{hex[u >> 4], hex[u & 15]};
                                              }();
                    diags.push_back({Severity::Error, "unexpected character " + shown, line_no, col(start)});
                    return {};
                }
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line_no;
    end.column = text.size() + 1;
    if (!text.empty() && text.back() == '\r') end.column = text.size();
    out.push_back(end);
    return out;
}

struct EventEntry {
    Token id;
    Token value_token;
    int value = 0;
};

class LineParser {
public:
    explicit LineParser(const std::vector<Token>& toks) : toks_(toks) {}

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        next();
        return true;
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
        return next();
    }
    const Token& expect_keyword(const char* kw) {
        if (peek().kind != Tok::Ident || peek().text != kw) {
            fail(peek(), std::string("expected '") + kw + "', found " + describe(peek()));
        }
        return next();
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()) + " at end of declaration");
    }
    [[noreturn]] static void fail(const Token& at, std::string message) {
        throw LineError{std::move(message), at.line, at.column};
    }

    Complex expression() {
        Complex v = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = next().kind == Tok::Minus;
            const Complex rhs = term();
            v = minus ? v - rhs : v + rhs;
        }
        return v;
    }

    std::vector<Complex> vector() {
        expect(Tok::LBracket, "'['");
        std::vector<Complex> out;
        out.push_back(checked(expression()));
        while (accept(Tok::Comma)) out.push_back(checked(expression()));
        expect(Tok::RBracket, "',' or ']'");
        return out;
    }

    std::vector<Token> id_list() {
        expect(Tok::LParen, "'('");
        std::vector<Token> ids;
        ids.push_back(expect(Tok::Ident, "identifier"));
        while (accept(Tok::Comma)) ids.push_back(expect(Tok::Ident, "identifier"));
        expect(Tok::RParen, "',' or ')'");
        return ids;
    }

    std::vector<EventEntry> event() {
        const Token& p = expect(Tok::Ident, "event 'P('");
        if (p.text != "P") fail(p, "expected event 'P(', found " + describe(p));
        expect(Tok::LParen, "'('");
        std::vector<EventEntry> entries;
        do {
            EventEntry e;
            e.id = expect(Tok::Ident, "identifier");
            expect(Tok::Equals, "'='");
            e.value_token = peek();
            e.value = signed_integer("outcome");
            entries.push_back(std::move(e));
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "',' or ')'");
        return entries;
    }

    int signed_integer(const char* what) {
        bool minus = false;
        if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) minus = next().kind == Tok::Minus;
        const Token& t = expect(Tok::Number, what);
        long long v = 0;
        const auto* first = t.text.data();
        const auto* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || v > 1'000'000'000) {
            fail(t, std::string(what) + " must be an integer, found '" + t.text + "'");
        }
        return static_cast<int>(minus ? -v : v);
    }

private:
    Complex checked(Complex z) {
        if (!is_finite(z)) fail(peek(), "numeric value is not finite");
        return z;
    }

    Complex term() {
        Complex v = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token& op = next();
            const Complex rhs = unary();
            if (op.kind == Tok::Slash && rhs == Complex{}) fail(op, "division by zero");
            v = op.kind == Tok::Star ? v * rhs : v / rhs;
        }
        return v;
    }

    Complex unary() {
        if (accept(Tok::Minus)) return nested([&] { return -unary(); });
        if (accept(Tok::Plus)) return nested([&] { return unary(); });
        return primary();
    }

    template <class F>
    Complex nested(F&& f) {
        if (++depth_ > kMaxNesting) fail(peek(), "expression nested too deeply");
        const Complex v = f();
        --depth_;
        return v;
    }

    Complex primary() {
        const Token& t = next();
        if (t.kind == Tok::Number) {
            double v = 0.0;
            const auto* first = t.text.data();
            const auto* last = first + t.text.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last) fail(t, "malformed number '" + t.text + "'");
            return v;
        }
        if (t.kind == Tok::LParen) {
            const Complex v = nested([&] { return expression(); });
            expect(Tok::RParen, "')'");
            return v;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "i") return {0.0, 1.0};
            if (t.text == "pi") return std::numbers::pi;
            if (t.text == "sqrt" || t.text == "cos" || t.text == "sin" || t.text == "exp") {
                expect(Tok::LParen, "'('");
                const Complex arg = nested([&] { return expression(); });
                expect(Tok::RParen, "')'");
                if (t.text == "sqrt") {
                    if (arg.imag() == 0.0 && arg.real() >= 0.0) return std::sqrt(arg.real());
                    return std::sqrt(arg);
                }
                if (t.text == "cos") return arg.imag() == 0.0 ? Complex(std::cos(arg.real())) : std::cos(arg);
                if (t.text == "sin") return arg.imag() == 0.0 ? Complex(std::sin(arg.real())) : std::sin(arg);
                return arg.imag() == 0.0 ? Complex(std::exp(arg.real())) : std::exp(arg);
            }
            fail(t, "unknown name '" + t.text + "' in numeric expression");
        }
        fail(t, "expected a number, found " + describe(t));
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

bool is_pauli_word(const std::string& s) {
    return !s.empty() && s.find_first_not_of("IXYZ") == std::string::npos;
}

// "x1", "Y3": letter plus 1-based qubit index.
bool is_subscript_factor(const std::string& s) {
    if (s.size() < 2) return false;
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    if (c != 'x' && c != 'y' && c != 'z') return false;
    return s.find_first_not_of("0123456789", 1) == std::string::npos;
}

class ScenarioBuilder {
public:
    explicit ScenarioBuilder(std::vector<ParseDiagnostic>& diags) : diags_(diags) {}

    void error(const Token& at, std::string message) {
        diags_.push_back({Severity::Error, std::move(message), at.line, at.column});
    }

    // Returns false when the header is unusable and parsing must stop.
    bool header(LineParser& p) {
        p.expect_keyword("scenario");
        const Token& name = p.expect(Tok::String, "scenario name string");
        p.expect_keyword("dim");
        const Token& dim_tok = p.peek();
        const int dim = p.signed_integer("dimension");
        p.expect_end();
        if (dim <= 0) {
            error(dim_tok, "dimension must be positive");
            return false;
        }
        try {
            scenario_.emplace(name.text, static_cast<std::size_t>(dim));
        } catch (const Error& e) {
            error(dim_tok, e.what());
            return false;
        }
        return true;
    }

    void statement(LineParser& p) {
        const Token& kw = p.expect(Tok::Ident, "a declaration keyword");
        const std::string& k = kw.text;
        if (k == "scenario") LineParser::fail(kw, "duplicate scenario header");
        if (k == "tolerance") return tolerance(p, kw);
        if (k == "state") return state(p, kw);
        if (k == "proj" || k == "pauli" || k == "obs") return observable(p, kw);
        if (k == "context") return context(p, kw);
        if (k == "partition") return partition(p, kw);
        if (k == "product") return product(p, kw);
        if (k == "query") return query(p, kw);
        if (k == "functional") return functional(p, kw);
        LineParser::fail(kw, "unknown declaration '" + k + "'");
    }

    std::optional<Scenario> finish(std::size_t last_line) {
        if (scenario_ && !saw_state_) {
            diags_.push_back({Severity::Warning, "no state declared; using the uniform superposition", last_line, 1});
        }
        for (const auto& d : diags_) {
            if (d.severity == Severity::Error) return std::nullopt;
        }
        return std::move(scenario_);
    }

private:
    Scenario& sc() { return *scenario_; }

    template <class F>
    void apply(const Token& at, F&& f) {
        try {
            f();
        } catch (const Error& e) {
            std::string msg = e.what();
            switch (e.code()) {
                case ErrorCode::ZeroVector: msg = "zero vector: " + msg; break;
                case ErrorCode::DimensionMismatch: msg = "dimension mismatch: " + msg; break;
                case ErrorCode::OverlappingPartition: msg = "partition overlap: " + msg; break;
                default: break;
            }
            error(at, msg);
        }
    }

    bool declare(const Token& id) {
        if (!names_.insert(id.text).second) {
            error(id, "duplicate identifier '" + id.text + "'");
            return false;
        }
        return true;
    }

    bool known(const Token& id) {
        if (sc().observables().contains(id.text)) return true;
        error(id, "unknown identifier '" + id.text + "'");
        return false;
    }

    bool known_all(const std::vector<Token>& ids) {
        bool ok = true;
        for (const auto& t : ids) ok = known(t) && ok;
        return ok;
    }

    void tolerance(LineParser& p, const Token& kw) {
        const Complex v = p.expression();
        p.expect_end();
        if (v.imag() != 0.0 || !(v.real() > 0.0)) LineParser::fail(kw, "tolerance must be a positive real number");
        apply(kw, [&] { sc().set_tolerance(v.real()); });
    }

    void state(LineParser& p, const Token& kw) {
        const Token id = p.expect(Tok::Ident, "state name");
        p.expect(Tok::Equals, "'='");
        auto v = p.vector();
        p.expect_end();
        if (saw_state_) {
            error(kw, "duplicate state declaration");
            return;
        }
        if (!declare(id)) return;
        if (v.size() != sc().dim()) {
            error(id, "dimension mismatch: state has " + std::to_string(v.size()) + " entries, scenario dim is " +
                          std::to_string(sc().dim()));
            return;
        }
        saw_state_ = true;
        apply(id, [&] { sc().set_state(id.text, std::move(v)); });
    }

    void observable(LineParser& p, const Token& kw) {
        const Token id = p.expect(Tok::Ident, "observable name");
        p.expect(Tok::Equals, "'='");
        const std::size_t dim = sc().dim();
        if (kw.text == "proj") {
            auto v = p.vector();
            p.expect_end();
            if (!declare(id)) return;
            if (v.size() != dim) {
                error(id, "dimension mismatch: vector has " + std::to_string(v.size()) + " entries, scenario dim is " +
                              std::to_string(dim));
                return;
            }
            apply(id, [&] { sc().add_observable(Observable::projector(id.text, std::move(v))); });
        } else if (kw.text == "obs") {
            auto v = p.vector();
            p.expect_end();
            if (!declare(id)) return;
            if (v.size() != dim * dim) {
                error(id, "dimension mismatch: matrix has " + std::to_string(v.size()) + " entries, expected " +
                              std::to_string(dim * dim));
                return;
            }
            apply(id, [&] { sc().add_observable(Observable::matrix(id.text, ComplexMatrix(dim, std::move(v)))); });
        } else {
            auto word = pauli_word(p);
            p.expect_end();
            if (!declare(id)) return;
            if ((std::size_t{1} << std::min<std::size_t>(word.size(), 20)) != dim) {
                error(id, "dimension mismatch: Pauli word on " + std::to_string(word.size()) +
                              " qubits does not act on dimension " + std::to_string(dim));
                return;
            }
            apply(id, [&] { sc().add_observable(Observable::pauli(id.text, std::move(word))); });
        }
    }

    PauliString pauli_word(LineParser& p) {
        bool minus = false;
        if (p.peek().kind == Tok::Minus || p.peek().kind == Tok::Plus) minus = p.next().kind == Tok::Minus;
        const Token& first = p.expect(Tok::Ident, "Pauli word");
        if (is_pauli_word(first.text)) {
            return PauliString(minus ? Phase::minus_one() : Phase::plus_one(), PauliString::parse(first.text).letters());
        }
        // Subscript form: qubit count follows from the scenario dimension.
        std::size_t n = 0;
        while ((std::size_t{1} << n) < sc().dim()) ++n;
        if ((std::size_t{1} << n) != sc().dim()) {
            LineParser::fail(first, "dimension mismatch: dim " + std::to_string(sc().dim()) + " is not a power of two");
        }
        PauliString acc = PauliString::identity(n);
        const Token* t = &first;
        while (true) {
            if (!is_subscript_factor(t->text)) LineParser::fail(*t, "invalid Pauli word '" + t->text + "'");
            std::size_t q = 0;
            auto [ptr, ec] = std::from_chars(t->text.data() + 1, t->text.data() + t->text.size(), q);
            if (ec != std::errc() || q == 0 || q > n) {
                LineParser::fail(*t, "qubit index in '" + t->text + "' outside 1.." + std::to_string(n));
            }
            std::vector<PauliLetter> letters(n, PauliLetter::I);
            const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t->text[0])));
            letters[q - 1] = c == 'x' ? PauliLetter::X : c == 'y' ? PauliLetter::Y : PauliLetter::Z;
            acc = pauli_product(acc, PauliString(Phase{}, std::move(letters)));
            if (!p.accept(Tok::Star)) break;
            t = &p.expect(Tok::Ident, "Pauli factor");
        }
        if (!acc.phase().is_real()) LineParser::fail(first, "Pauli product is not Hermitian (phase " + acc.str() + ")");
        if (minus) acc = pauli_product(PauliString(Phase::minus_one(), std::vector<PauliLetter>(n)), acc);
        return acc;
    }

    void context(LineParser& p, const Token& kw) {
        const auto ids = p.id_list();
        p.expect_end();
        if (!known_all(ids)) return;
        std::vector<ObservableId> members;
        for (const auto& t : ids) members.push_back(t.text);
        apply(kw, [&] { sc().add_context(std::move(members)); });
    }

    std::optional<Event> make_event(const std::vector<EventEntry>& entries) {
        bool ok = true;
        std::vector<Outcome> out;
        std::set<std::string> seen;
        for (const auto& e : entries) {
            if (!known(e.id)) {
                ok = false;
                continue;
            }
            if (!seen.insert(e.id.text).second) {
                error(e.id, "observable '" + e.id.text + "' appears twice in one event");
                ok = false;
                continue;
            }
            if (!sc().observables().at(e.id.text).has_outcome(e.value)) {
                const auto oc = sc().observables().at(e.id.text).outcomes();
                error(e.value_token, "outcome " + std::to_string(e.value) + " outside the outcome set {" +
                                         std::to_string(oc[0]) + "," + std::to_string(oc[1]) + "} of '" +
                                         e.id.text + "'");
                ok = false;
                continue;
            }
            out.push_back({e.id.text, e.value});
        }
        if (!ok) return std::nullopt;
        return Event(std::move(out));
    }

    void partition(LineParser& p, const Token& kw) {
        std::vector<std::vector<EventEntry>> raw;
        raw.push_back(p.event());
        while (p.accept(Tok::Plus)) raw.push_back(p.event());
        p.expect(Tok::Equals, "'+' or '='");
        const Token& one = p.peek();
        if (p.signed_integer("1") != 1) LineParser::fail(one, "partition must sum to 1");
        p.expect_end();
        PartitionUnity pu;
        bool ok = true;
        for (const auto& r : raw) {
            if (auto e = make_event(r)) pu.events.push_back(std::move(*e));
            else ok = false;
        }
        if (ok) apply(kw, [&] { sc().add_constraint(std::move(pu)); });
    }

    void product(LineParser& p, const Token& kw) {
        const auto ids = p.id_list();
        p.expect(Tok::Equals, "'='");
        const Token& target_tok = p.peek();
        const int target = p.signed_integer("+1 or -1");
        p.expect_end();
        if (target != 1 && target != -1) LineParser::fail(target_tok, "product target must be 1 or -1");
        if (!known_all(ids)) return;
        ProductEquals pe;
        for (const auto& t : ids) pe.ids.push_back(t.text);
        pe.target = target;
        apply(kw, [&] { sc().add_constraint(std::move(pe)); });
    }

    void query(LineParser& p, const Token& kw) {
        if (p.peek().kind == Tok::Ident && p.peek().text == "product") {
            p.next();
            const auto ids = p.id_list();
            p.expect_end();
            if (!known_all(ids)) return;
            ProductQuery q;
            for (const auto& t : ids) q.ids.push_back(t.text);
            apply(kw, [&] { sc().add_product_query(std::move(q)); });
            return;
        }
        const auto entries = p.event();
        p.expect_end();
        if (auto e = make_event(entries)) apply(kw, [&] { sc().add_query(std::move(*e)); });
    }

    void functional(LineParser& p, const Token& kw) {
        const Token name = p.expect(Tok::Ident, "functional name");
        p.expect(Tok::Equals, "'='");
        Functional f;
        f.name = name.text;
        std::vector<Token> refs;
        bool first = true;
        while (true) {
            double sign = 1.0;
            if (p.peek().kind == Tok::Plus || p.peek().kind == Tok::Minus) {
                sign = p.next().kind == Tok::Minus ? -1.0 : 1.0;
            } else if (!first) {
                break;
            }
            first = false;
            double coeff = 1.0;
            if (p.peek().kind == Tok::Number) {
                const Token& num = p.next();
                auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), coeff);
                if (ec != std::errc() || ptr != num.text.data() + num.text.size() || !std::isfinite(coeff)) {
                    LineParser::fail(num, "malformed coefficient '" + num.text + "'");
                }
                p.expect(Tok::Star, "'*'");
            }
            const Token a = p.expect(Tok::Ident, "observable");
            p.expect(Tok::Star, "'*'");
            const Token b = p.expect(Tok::Ident, "observable");
            refs.push_back(a);
            refs.push_back(b);
            f.terms.push_back({a.text, b.text, sign * coeff});
        }
        p.expect_end();
        if (!known_all(refs)) return;
        apply(kw, [&] { sc().add_functional(std::move(f)); });
    }

    std::vector<ParseDiagnostic>& diags_;
    std::optional<Scenario> scenario_;
    std::set<std::string> names_;
    bool saw_state_ = false;
};

}  // namespace

ParseResult parse_scenario(std::string_view source) {
    ParseResult result;
    auto& diags = result.diagnostics;
    try {
        // Split into lines, checking encoding as we go.
        std::vector<std::string_view> lines;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= source.size(); ++i) {
            if (i == source.size() || source[i] == '\n') {
                lines.push_back(source.substr(start, i - start));
                start = i + 1;
            }
        }
        for (std::size_t ln = 0; ln < lines.size(); ++ln) {
            const auto line = lines[ln];
            for (std::size_t i = 0; i < line.size();) {
                const std::size_t n = utf8_length(line, i);
                if (n == 0) {
                    diags.push_back({Severity::Error, "invalid UTF-8 sequence", ln + 1, i + 1});
                    break;
                }
                i += n;
            }
        }

        ScenarioBuilder builder(diags);
        bool have_header = false;
        std::size_t last_line = 1;
        for (std::size_t ln = 0; ln < lines.size(); ++ln) {
            const auto toks = lex_line(lines[ln], ln + 1, diags);
            if (toks.size() <= 1) continue;
            last_line = ln + 1;
            LineParser p(toks);
            try {
                if (!have_header) {
                    if (toks[0].kind != Tok::Ident || toks[0].text != "scenario") {
                        diags.push_back({Severity::Error, "missing scenario header", ln + 1, toks[0].column});
                        return result;
                    }
                    if (!builder.header(p)) return result;
                    have_header = true;
                    continue;
                }
                builder.statement(p);
            } catch (const LineError& e) {
                diags.push_back({Severity::Error, e.message, e.line, e.column});
                if (!have_header) return result;
            } catch (const Error& e) {
                diags.push_back({Severity::Error, e.what(), ln + 1, toks[0].column});
                if (!have_header) return result;
            }
        }
        if (!have_header) {
            // Lexing errors on the would-be header line already explain the problem.
            if (diags.empty()) diags.push_back({Severity::Error, "missing scenario header", 1, 1});
            return result;
        }
        result.scenario = builder.finish(last_line);
    } catch (const std::exception& e) {
        result.scenario.reset();
        diags.push_back({Severity::Error, std::string("internal error: ") + e.what(), 1, 1});
    }
    return result;
}

namespace {

std::string vector_text(std::span<const Complex> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_complex(v[i]);
    }
    return s + "]";
}

std::string id_list_text(const std::vector<ObservableId>& ids) {
    std::string s = "(";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ", ";
        s += ids[i];
    }
    return s + ")";
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

std::string serialize(const Scenario& s) {
    std::string out;
    out += "scenario " + quoted(s.name()) + " dim " + std::to_string(s.dim()) + "\n";
    out += "tolerance " + format_number(s.tolerance()) + "\n";
    out += "state " + s.state_id() + " = " + vector_text(s.raw_state()) + "\n";
    for (const auto& o : s.observables()) {
        switch (o.kind()) {
            case ObservableKind::Projector:
                out += "proj " + o.id() + " = " + vector_text(o.projector_spec()->raw) + "\n";
                break;
            case ObservableKind::Pauli: out += "pauli " + o.id() + " = " + o.pauli_string()->str() + "\n"; break;
            case ObservableKind::Matrix: out += "obs " + o.id() + " = " + vector_text(o.op().entries()) + "\n"; break;
        }
    }
    for (const auto& c : s.contexts()) out += "context " + id_list_text(c.members()) + "\n";
    for (const auto& c : s.constraints()) {
        if (const auto* pu = std::get_if<PartitionUnity>(&c)) {
            out += "partition ";
            for (std::size_t i = 0; i < pu->events.size(); ++i) {
                if (i) out += " + ";
                out += pu->events[i].str();
            }
            out += " = 1\n";
        } else {
            const auto& pe = std::get<ProductEquals>(c);
            out += "product " + id_list_text(pe.ids) + " = " + std::to_string(pe.target) + "\n";
        }
    }
    for (const auto& q : s.queries()) out += "query " + q.str() + "\n";
    for (const auto& q : s.product_queries()) out += "query product " + id_list_text(q.ids) + "\n";
    for (const auto& f : s.functionals()) {
        out += "functional " + f.name + " =";
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
            const auto& t = f.terms[i];
            const double mag = std::abs(t.coefficient);
            out += std::signbit(t.coefficient) ? (i ? " - " : " -") : (i ? " + " : " ");
            if (mag != 1.0) out += format_number(mag) + "*";
            out += t.a + "*" + t.b;
        }
        out += "\n";
    }
    return out;
}

}  // namespace bks
