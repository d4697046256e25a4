#include <cctype>
#include <charconv>

#include "gridlens/error.hpp"
#include "gridlens/formula.hpp"

namespace gridlens {

namespace {

bool is_word_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '$';
}

// Recursive descent over the formula text. Precedence, loosest first:
// comparison, &, + -, * /, ^, unary sign.
class Parser {
public:
    Parser(std::string_view src, std::string_view host) : src_(src), host_(host) {}

    Expr parse() {
        if (src_.empty() || src_.front() != '=') fail("'='");
        pos_ = 1;
        Expr e = comparison();
        skip_ws();
        if (!eof()) fail("operator or end of formula");
        return e;
    }

private:
    [[noreturn]] void fail(std::string expected) const { throw FormulaParseError(pos_, std::move(expected)); }

    bool eof() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool accept(char ch) {
        skip_ws();
        if (peek() == ch) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char ch) {
        if (!accept(ch)) fail(std::string("'") + ch + "'");
    }

    Expr comparison() {
        Expr lhs = concat();
        for (;;) {
            skip_ws();
            BinaryOperator op;
            if (peek() == '<' && peek(1) == '=') op = BinaryOperator::LessEqual, pos_ += 2;
            else if (peek() == '>' && peek(1) == '=') op = BinaryOperator::GreaterEqual, pos_ += 2;
            else if (peek() == '<' && peek(1) == '>') op = BinaryOperator::NotEqual, pos_ += 2;
            else if (peek() == '<') op = BinaryOperator::Less, ++pos_;
            else if (peek() == '>') op = BinaryOperator::Greater, ++pos_;
            else if (peek() == '=') op = BinaryOperator::Equal, ++pos_;
            else return lhs;
            lhs = binary(op, std::move(lhs), concat());
        }
    }

    Expr concat() {
        Expr lhs = additive();
        while (accept('&')) lhs = binary(BinaryOperator::Concat, std::move(lhs), additive());
        return lhs;
    }

    Expr additive() {
        Expr lhs = multiplicative();
        for (;;) {
            if (accept('+')) lhs = binary(BinaryOperator::Add, std::move(lhs), multiplicative());
            else if (accept('-')) lhs = binary(BinaryOperator::Subtract, std::move(lhs), multiplicative());
            else return lhs;
        }
    }

    Expr multiplicative() {
        Expr lhs = power();
        for (;;) {
            if (accept('*')) lhs = binary(BinaryOperator::Multiply, std::move(lhs), power());
            else if (accept('/')) lhs = binary(BinaryOperator::Divide, std::move(lhs), power());
            else return lhs;
        }
    }

    // Left-associative, and the sign binds tighter: -2^2 == 4.
    Expr power() {
        Expr lhs = signed_operand();
        while (accept('^')) lhs = binary(BinaryOperator::Power, std::move(lhs), signed_operand());
        return lhs;
    }

    Expr signed_operand() {
        if (accept('-')) return unary(UnaryOperator::Minus, signed_operand());
        if (accept('+')) return unary(UnaryOperator::Plus, signed_operand());
        return primary();
    }

    Expr primary() {
        skip_ws();
        if (eof()) fail("operand");
        char ch = peek();
        if (ch == '(') {
            ++pos_;
            Expr inner = comparison();
            expect(')');
            return inner;
        }
        if (ch == '"') return string_literal();
        if (ch == '\'') {
            std::string sheet = quoted_sheet();
            return reference(std::move(sheet), true);
        }
        if (!is_word_char(ch)) fail("operand");

        std::size_t start = pos_;
        std::size_t end = start;
        while (end < src_.size() && is_word_char(src_[end])) ++end;
        std::string_view word = src_.substr(start, end - start);

        if (end < src_.size() && src_[end] == '!') {
            if (word.find('$') != std::string_view::npos) fail("sheet name");
            pos_ = end + 1;
            return reference(std::string(word), true);
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number_literal();

        pos_ = end;
        std::size_t after_word = pos_;
        skip_ws();
        if (peek() == '(') {
            if (word.find('$') != std::string_view::npos) fail("function name");
            ++pos_;
            return function_call(to_upper(word));
        }
        pos_ = after_word;

        std::string upper = to_upper(word);
        if (upper == "TRUE") return boolean(true);
        if (upper == "FALSE") return boolean(false);
        if (auto a = parse_address(word, host_)) {
            pos_ = start;
            return reference(std::string(host_), false);
        }
        if (word.find('$') != std::string_view::npos || std::isdigit(static_cast<unsigned char>(word.front()))) {
            pos_ = start;
            fail("operand");
        }
        return Expr{NameRef{std::string(word)}};
    }

    Expr function_call(std::string name) {
        std::vector<Expr> args;
        if (accept(')')) return call(std::move(name), std::move(args));
        for (;;) {
            args.push_back(comparison());
            if (accept(',')) continue;
            expect(')');
            return call(std::move(name), std::move(args));
        }
    }

    Expr number_literal() {
        double value = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
        if (ec != std::errc{}) fail("number");
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        if (!eof() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("operator");
        return number(value);
    }

    Expr string_literal() {
        ++pos_;  // opening quote
        std::string value;
        for (;;) {
            if (eof()) fail("closing '\"'");
            char ch = src_[pos_++];
            if (ch == '"') {
                if (peek() == '"') {
                    value += '"';
                    ++pos_;
                    continue;
                }
                return text(std::move(value));
            }
            value += ch;
        }
    }

    std::string quoted_sheet() {
        ++pos_;
        std::string name;
        for (;;) {
            if (eof()) fail("closing quote of sheet name");
            char ch = src_[pos_++];
            if (ch == '\'') {
                if (peek() == '\'') {
                    name += '\'';
                    ++pos_;
                    continue;
                }
                break;
            }
            name += ch;
        }
        if (name.empty()) fail("sheet name");
        if (peek() != '!') fail("'!'");
        ++pos_;
        return name;
    }

    CellAddress local_cell(const std::string& sheet) {
        std::size_t start = pos_;
        std::size_t end = start;
        while (end < src_.size() && is_word_char(src_[end])) ++end;
        auto a = parse_address(src_.substr(start, end - start), sheet);
        if (!a || src_.substr(start, end - start).find('!') != std::string_view::npos) fail("cell reference");
        pos_ = end;
        return *a;
    }

    // Cell or range on `sheet`; the cursor sits at the local part.
    Expr reference(std::string sheet, bool qualified) {
        CellAddress first = local_cell(sheet);
        std::size_t save = pos_;
        if (!accept(':')) {
            pos_ = save;
            return cell(std::move(first), qualified);
        }
        skip_ws();
        // An end corner may repeat the sheet qualifier.
        if (peek() == '\'') {
            if (quoted_sheet() != sheet) fail("reference on the same sheet");
        } else {
            std::size_t end = pos_;
            while (end < src_.size() && is_word_char(src_[end])) ++end;
            if (end < src_.size() && src_[end] == '!') {
                if (src_.substr(pos_, end - pos_) != sheet) fail("reference on the same sheet");
                pos_ = end + 1;
            }
        }
        CellAddress second = local_cell(sheet);
        return range(CellRange(std::move(first), std::move(second)), qualified);
    }

    std::string_view src_;
    std::string_view host_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_upper(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

Expr number(double v) { return Expr{NumberLit{v}}; }
Expr text(std::string v) { return Expr{TextLit{std::move(v)}}; }
Expr boolean(bool v) { return Expr{BoolLit{v}}; }
Expr cell(CellAddress a, bool qualified) { return Expr{CellRef{std::move(a), qualified}}; }
Expr range(CellRange r, bool qualified) { return Expr{RangeRef{std::move(r), qualified}}; }

Expr unary(UnaryOperator op, Expr operand) {
    UnaryOp u{op, {}};
    u.operand.push_back(std::move(operand));
    return Expr{std::move(u)};
}

Expr binary(BinaryOperator op, Expr lhs, Expr rhs) {
    BinaryOp b{op, {}};
    b.operands.reserve(2);
    b.operands.push_back(std::move(lhs));
    b.operands.push_back(std::move(rhs));
    return Expr{std::move(b)};
}

Expr call(std::string name, std::vector<Expr> args) { return Expr{FunctionCall{to_upper(name), std::move(args)}}; }

Expr parse_formula(std::string_view text, std::string_view host_sheet) {
    return Parser(text, host_sheet).parse();
}

}  // namespace gridlens
