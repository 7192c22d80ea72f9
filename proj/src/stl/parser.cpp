#include "sff/stl/parser.hpp"

#include <cctype>
#include <charconv>

namespace sff::stl {

namespace {

enum class Tok { Ident, True, Number, Not, And, Or, UntilOp, AlwaysOp, EventuallyOp,
                 LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::True: return "'true'";
        case Tok::Number: return "number";
        case Tok::Not: return "'!'";
        case Tok::And: return "'&'";
        case Tok::Or: return "'|'";
        case Tok::UntilOp: return "'U['";
        case Tok::AlwaysOp: return "'G['";
        case Tok::EventuallyOp: return "'F['";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
  public:
    explicit Lexer(const std::string& text) : s_(text) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        cur_.pos = i_;
        if (i_ >= s_.size()) {
            cur_ = {Tok::End, "", 0.0, i_};
            return;
        }
        char c = s_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            std::string word = s_.substr(start, i_ - start);
            // U/G/F immediately followed by '[' are temporal operators.
            if (i_ < s_.size() && s_[i_] == '[' &&
                (word == "U" || word == "G" || word == "F")) {
                ++i_;  // consume '['
                Tok k = word == "U" ? Tok::UntilOp : word == "G" ? Tok::AlwaysOp
                                                                 : Tok::EventuallyOp;
                cur_ = {k, word + "[", 0.0, start};
                return;
            }
            if (word == "true") {
                cur_ = {Tok::True, word, 0.0, start};
                return;
            }
            cur_ = {Tok::Ident, word, 0.0, start};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) ||
                                      s_[i_] == '.' || s_[i_] == 'e' || s_[i_] == 'E' ||
                                      ((s_[i_] == '+' || s_[i_] == '-') && i_ > start &&
                                       (s_[i_ - 1] == 'e' || s_[i_ - 1] == 'E'))))
                ++i_;
            std::string num = s_.substr(start, i_ - start);
            double v = 0.0;
            auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc() || p != num.data() + num.size())
                throw SyntaxError(start, "number", "'" + num + "'");
            cur_ = {Tok::Number, num, v, start};
            return;
        }
        std::size_t start = i_++;
        switch (c) {
            case '!': cur_ = {Tok::Not, "!", 0.0, start}; return;
            case '&': cur_ = {Tok::And, "&", 0.0, start}; return;
            case '|': cur_ = {Tok::Or, "|", 0.0, start}; return;
            case '(': cur_ = {Tok::LParen, "(", 0.0, start}; return;
            case ')': cur_ = {Tok::RParen, ")", 0.0, start}; return;
            case '[': cur_ = {Tok::LBracket, "[", 0.0, start}; return;
            case ']': cur_ = {Tok::RBracket, "]", 0.0, start}; return;
            case ',': cur_ = {Tok::Comma, ",", 0.0, start}; return;
            default:
                throw SyntaxError(start, "formula token", "'" + std::string(1, c) + "'");
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token cur_;
};

class Parser {
  public:
    Parser(const std::string& text, const std::set<std::string>& table)
        : lex_(text), table_(table) {}

    Formula parse() {
        Formula f = parse_or();
        expect(Tok::End);
        return f;
    }

  private:
    Token expect(Tok kind) {
        if (lex_.peek().kind != kind)
            throw SyntaxError(lex_.peek().pos, tok_name(kind),
                              lex_.peek().kind == Tok::End ? "end of input"
                                                           : "'" + lex_.peek().text + "'");
        return lex_.take();
    }

    // Reads "a , b ]" after an already-consumed "X[" token.
    Interval parse_interval() {
        double a = expect(Tok::Number).number;
        expect(Tok::Comma);
        double b = expect(Tok::Number).number;
        expect(Tok::RBracket);
        if (!(a >= 0.0) || !(b >= a)) throw BadInterval(a, b);
        return {a, b};
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            parts.push_back(parse_and());
        }
        return parts.size() == 1 ? parts.front() : Formula::disj(std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_until()};
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            parts.push_back(parse_until());
        }
        return parts.size() == 1 ? parts.front() : Formula::conj(std::move(parts));
    }

    Formula parse_until() {
        Formula lhs = parse_unary();
        if (lex_.peek().kind == Tok::UntilOp) {
            lex_.take();
            Interval i = parse_interval();
            Formula rhs = parse_unary();
            return Formula::until(std::move(lhs), i, std::move(rhs));
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Not: {
                lex_.take();
                return Formula::negate(parse_unary());
            }
            case Tok::AlwaysOp: {
                lex_.take();
                Interval i = parse_interval();
                return Formula::always(i, parse_unary());
            }
            case Tok::EventuallyOp: {
                lex_.take();
                Interval i = parse_interval();
                return Formula::eventually(i, parse_unary());
            }
            case Tok::LParen: {
                lex_.take();
                Formula f = parse_or();
                expect(Tok::RParen);
                return f;
            }
            case Tok::True: {
                lex_.take();
                return Formula::truth();
            }
            case Tok::Ident: {
                Token id = lex_.take();
                if (!table_.count(id.text)) throw UnknownPredicate(id.text);
                return Formula::atom(id.text);
            }
            default:
                throw SyntaxError(t.pos, "'!', 'G[', 'F[', '(', 'true' or identifier",
                                  t.kind == Tok::End ? "end of input" : "'" + t.text + "'");
        }
    }

    Lexer lex_;
    const std::set<std::string>& table_;
};

}  // namespace

Formula parse_stl(const std::string& text, const std::set<std::string>& table) {
    return Parser(text, table).parse();
}

}  // namespace sff::stl
