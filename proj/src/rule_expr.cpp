#include "dq/rule_expr.hpp"

#include <cctype>
#include <cmath>
#include <utility>

namespace dq {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class TokKind {
    number_int,
    number_float,
    string,
    ident,
    kw_and,
    kw_or,
    kw_not,
    kw_true,
    kw_false,
    kw_sum,
    plus,
    minus,
    star,
    slash,
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
    lparen,
    rparen,
    dot,
    end,
};

struct Token {
    TokKind kind;
    std::size_t pos;
    std::string text;      // ident / string payload
    std::int64_t int_val = 0;
    double float_val = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_ws();
        std::size_t pos = at_;
        if (at_ >= src_.size()) return {TokKind::end, pos, {}};
        char c = src_[at_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && at_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[at_ + 1]))))
            return lex_number(pos);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(pos);
        if (c == '"') return lex_string(pos);
        ++at_;
        switch (c) {
            case '+': return {TokKind::plus, pos, {}};
            case '-': return {TokKind::minus, pos, {}};
            case '*': return {TokKind::star, pos, {}};
            case '/': return {TokKind::slash, pos, {}};
            case '(': return {TokKind::lparen, pos, {}};
            case ')': return {TokKind::rparen, pos, {}};
            case '.': return {TokKind::dot, pos, {}};
            case '=':
                if (take('=')) return {TokKind::eq, pos, {}};
                throw ExprError("expected '==' (single '=' is not an operator)", pos);
            case '!':
                if (take('=')) return {TokKind::ne, pos, {}};
                throw ExprError("expected '!='", pos);
            case '<': return {take('=') ? TokKind::le : TokKind::lt, pos, {}};
            case '>': return {take('=') ? TokKind::ge : TokKind::gt, pos, {}};
        }
        throw ExprError(std::string("unexpected character '") + c + "'", pos);
    }

private:
    void skip_ws() {
        while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
    }

    bool take(char c) {
        if (at_ < src_.size() && src_[at_] == c) {
            ++at_;
            return true;
        }
        return false;
    }

    Token lex_number(std::size_t pos) {
        std::size_t start = at_;
        bool is_float = false;
        while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) ++at_;
        if (at_ < src_.size() && src_[at_] == '.' && at_ + 1 < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[at_ + 1]))) {
            is_float = true;
            ++at_;
            while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) ++at_;
        } else if (at_ < src_.size() && src_[at_] == '.' &&
                   !(at_ + 1 < src_.size() &&
                     (std::isalpha(static_cast<unsigned char>(src_[at_ + 1])) ||
                      src_[at_ + 1] == '_'))) {
            // trailing dot as in "3."  (but "a.b" style dots belong to idents)
            is_float = true;
            ++at_;
        }
        if (at_ < src_.size() && (src_[at_] == 'e' || src_[at_] == 'E')) {
            std::size_t save = at_;
            ++at_;
            if (at_ < src_.size() && (src_[at_] == '+' || src_[at_] == '-')) ++at_;
            if (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) {
                is_float = true;
                while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_])))
                    ++at_;
            } else {
                at_ = save;
            }
        }
        std::string_view body = src_.substr(start, at_ - start);
        Token tok{is_float ? TokKind::number_float : TokKind::number_int, pos, std::string(body)};
        if (is_float) {
            auto v = parse_float(body);
            if (!v) throw ExprError("bad numeric literal '" + std::string(body) + "'", pos);
            tok.float_val = *v;
        } else {
            auto v = parse_integer(body);
            if (!v) throw ExprError("integer literal out of range '" + std::string(body) + "'", pos);
            tok.int_val = *v;
        }
        return tok;
    }

    Token lex_ident(std::size_t pos) {
        std::size_t start = at_;
        while (at_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[at_])) ||
                                     src_[at_] == '_'))
            ++at_;
        std::string word(src_.substr(start, at_ - start));
        if (word == "and") return {TokKind::kw_and, pos, {}};
        if (word == "or") return {TokKind::kw_or, pos, {}};
        if (word == "not") return {TokKind::kw_not, pos, {}};
        if (word == "true") return {TokKind::kw_true, pos, {}};
        if (word == "false") return {TokKind::kw_false, pos, {}};
        if (word == "sum") return {TokKind::kw_sum, pos, {}};
        return {TokKind::ident, pos, std::move(word)};
    }

    Token lex_string(std::size_t pos) {
        ++at_;  // opening quote
        std::string out;
        while (at_ < src_.size()) {
            char c = src_[at_++];
            if (c == '"') return {TokKind::string, pos, std::move(out)};
            if (c == '\\') {
                if (at_ >= src_.size()) break;
                char esc = src_[at_++];
                if (esc == '"' || esc == '\\')
                    out.push_back(esc);
                else
                    throw ExprError(std::string("unknown escape '\\") + esc + "'", at_ - 1);
            } else {
                out.push_back(c);
            }
        }
        throw ExprError("unterminated string literal", pos);
    }

    std::string_view src_;
    std::size_t at_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    ExprPtr parse() {
        ExprPtr e = parse_or();
        if (cur_.kind != TokKind::end)
            throw ExprError("unexpected trailing input", cur_.pos);
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool accept(TokKind k) {
        if (cur_.kind == k) {
            advance();
            return true;
        }
        return false;
    }

    void expect(TokKind k, const char* what) {
        if (cur_.kind != k) throw ExprError(std::string("expected ") + what, cur_.pos);
        advance();
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (accept(TokKind::kw_or)) {
            ExprPtr rhs = parse_and();
            lhs = binary(BinaryOp::logic_or, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_cmp();
        while (accept(TokKind::kw_and)) {
            ExprPtr rhs = parse_cmp();
            lhs = binary(BinaryOp::logic_and, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_add();
        for (;;) {
            BinaryOp op;
            switch (cur_.kind) {
                case TokKind::eq: op = BinaryOp::eq; break;
                case TokKind::ne: op = BinaryOp::ne; break;
                case TokKind::lt: op = BinaryOp::lt; break;
                case TokKind::le: op = BinaryOp::le; break;
                case TokKind::gt: op = BinaryOp::gt; break;
                case TokKind::ge: op = BinaryOp::ge; break;
                default: return lhs;
            }
            advance();
            ExprPtr rhs = parse_add();
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        for (;;) {
            if (accept(TokKind::plus))
                lhs = binary(BinaryOp::add, std::move(lhs), parse_mul());
            else if (accept(TokKind::minus))
                lhs = binary(BinaryOp::sub, std::move(lhs), parse_mul());
            else
                return lhs;
        }
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (accept(TokKind::star))
                lhs = binary(BinaryOp::mul, std::move(lhs), parse_unary());
            else if (accept(TokKind::slash))
                lhs = binary(BinaryOp::div, std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    ExprPtr parse_unary() {
        if (accept(TokKind::kw_not)) return unary(UnaryOp::logic_not, parse_unary());
        if (accept(TokKind::minus)) return unary(UnaryOp::negate, parse_unary());
        return parse_primary();
    }

    ExprPtr parse_primary() {
        Token tok = cur_;
        switch (tok.kind) {
            case TokKind::number_int:
                advance();
                return literal(Value{tok.int_val});
            case TokKind::number_float:
                advance();
                return literal(Value{tok.float_val});
            case TokKind::string:
                advance();
                return literal(Value{tok.text});
            case TokKind::kw_true:
                advance();
                return literal(Value{true});
            case TokKind::kw_false:
                advance();
                return literal(Value{false});
            case TokKind::kw_sum: {
                advance();
                expect(TokKind::lparen, "'(' after sum");
                ColumnRef ref = parse_column_ref();
                expect(TokKind::rparen, "')'");
                auto e = std::make_unique<Expr>();
                e->node = SumExpr{std::move(ref)};
                return e;
            }
            case TokKind::ident: {
                ColumnRef ref = parse_column_ref();
                auto e = std::make_unique<Expr>();
                e->node = std::move(ref);
                return e;
            }
            case TokKind::lparen: {
                advance();
                ExprPtr e = parse_or();
                expect(TokKind::rparen, "')'");
                return e;
            }
            default:
                throw ExprError("expected expression", tok.pos);
        }
    }

    ColumnRef parse_column_ref() {
        if (cur_.kind != TokKind::ident) throw ExprError("expected column name", cur_.pos);
        std::string first = cur_.text;
        advance();
        if (accept(TokKind::dot)) {
            if (cur_.kind != TokKind::ident)
                throw ExprError("expected column name after '.'", cur_.pos);
            std::string second = cur_.text;
            advance();
            return ColumnRef{std::move(first), std::move(second)};
        }
        return ColumnRef{{}, std::move(first)};
    }

    static ExprPtr literal(Value v) {
        auto e = std::make_unique<Expr>();
        e->node = Literal{std::move(v)};
        return e;
    }

    static ExprPtr unary(UnaryOp op, ExprPtr operand) {
        auto e = std::make_unique<Expr>();
        e->node = UnaryExpr{op, std::move(operand)};
        return e;
    }

    static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_unique<Expr>();
        e->node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
        return e;
    }

    Lexer lexer_;
    Token cur_{TokKind::end, 0, {}};
};

// ---------------------------------------------------------------------------
// Printing

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::mul:
        case BinaryOp::div: return 5;
        case BinaryOp::add:
        case BinaryOp::sub: return 4;
        case BinaryOp::eq:
        case BinaryOp::ne:
        case BinaryOp::lt:
        case BinaryOp::le:
        case BinaryOp::gt:
        case BinaryOp::ge: return 3;
        case BinaryOp::logic_and: return 2;
        case BinaryOp::logic_or: return 1;
    }
    return 0;
}

constexpr int kUnaryPrec = 6;

std::string_view op_text(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return "+";
        case BinaryOp::sub: return "-";
        case BinaryOp::mul: return "*";
        case BinaryOp::div: return "/";
        case BinaryOp::eq: return "==";
        case BinaryOp::ne: return "!=";
        case BinaryOp::lt: return "<";
        case BinaryOp::le: return "<=";
        case BinaryOp::gt: return ">";
        case BinaryOp::ge: return ">=";
        case BinaryOp::logic_and: return "and";
        case BinaryOp::logic_or: return "or";
    }
    return "?";
}

int node_precedence(const Expr& e) {
    if (std::holds_alternative<BinaryExpr>(e.node))
        return precedence(std::get<BinaryExpr>(e.node).op);
    if (std::holds_alternative<UnaryExpr>(e.node)) return kUnaryPrec;
    return 7;  // atoms bind tightest
}

std::string print_literal(const Literal& lit) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const {
            std::string s = format_double(v);
            // keep a float marker so the literal re-lexes as a float
            if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
                s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
                s += ".0";
            return s;
        }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const {
            std::string out = "\"";
            for (char c : v) {
                if (c == '"' || c == '\\') out.push_back('\\');
                out.push_back(c);
            }
            out.push_back('"');
            return out;
        }
        std::string operator()(const Date& v) const { return "\"" + to_string(v) + "\""; }
        std::string operator()(const std::vector<std::string>&) const { return "<list>"; }
    };
    return std::visit(Visitor{}, lit.value);
}

std::string print(const Expr& e, bool full_parens);

std::string print_child(const Expr& child, int parent_prec, bool is_right, bool full_parens) {
    std::string body = print(child, full_parens);
    int child_prec = node_precedence(child);
    bool parens = full_parens ? child_prec < 7
                              : (child_prec < parent_prec ||
                                 (is_right && child_prec == parent_prec));
    return parens ? "(" + body + ")" : body;
}

std::string print(const Expr& e, bool full_parens) {
    struct Visitor {
        bool full;
        std::string operator()(const Literal& lit) const { return print_literal(lit); }
        std::string operator()(const ColumnRef& ref) const { return ref.qualified(); }
        std::string operator()(const SumExpr& s) const {
            return "sum(" + s.column.qualified() + ")";
        }
        std::string operator()(const UnaryExpr& u) const {
            std::string op = u.op == UnaryOp::logic_not ? "not " : "-";
            bool atom = node_precedence(*u.operand) == 7;
            std::string body = print(*u.operand, full);
            return op + (atom && !full ? body : "(" + body + ")");
        }
        std::string operator()(const BinaryExpr& b) const {
            int prec = precedence(b.op);
            return print_child(*b.lhs, prec, false, full) + " " + std::string(op_text(b.op)) +
                   " " + print_child(*b.rhs, prec, true, full);
        }
    };
    return std::visit(Visitor{full_parens}, e.node);
}

}  // namespace

ExprPtr parse_rule_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& expr) { return print(expr, false); }

std::string to_string_parenthesized(const Expr& expr) { return print(expr, true); }

ExprPtr clone(const Expr& expr) {
    auto out = std::make_unique<Expr>();
    struct Visitor {
        Expr& out;
        void operator()(const Literal& lit) { out.node = lit; }
        void operator()(const ColumnRef& ref) { out.node = ref; }
        void operator()(const SumExpr& s) { out.node = s; }
        void operator()(const UnaryExpr& u) { out.node = UnaryExpr{u.op, clone(*u.operand)}; }
        void operator()(const BinaryExpr& b) {
            out.node = BinaryExpr{b.op, clone(*b.lhs), clone(*b.rhs)};
        }
    };
    std::visit(Visitor{*out}, expr.node);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* la = std::get_if<Literal>(&a.node)) {
        const auto& lb = std::get<Literal>(b.node);
        return la->value == lb.value;
    }
    if (const auto* ra = std::get_if<ColumnRef>(&a.node))
        return *ra == std::get<ColumnRef>(b.node);
    if (const auto* sa = std::get_if<SumExpr>(&a.node))
        return sa->column == std::get<SumExpr>(b.node).column;
    if (const auto* ua = std::get_if<UnaryExpr>(&a.node)) {
        const auto& ub = std::get<UnaryExpr>(b.node);
        return ua->op == ub.op && structurally_equal(*ua->operand, *ub.operand);
    }
    const auto& ba = std::get<BinaryExpr>(a.node);
    const auto& bb = std::get<BinaryExpr>(b.node);
    return ba.op == bb.op && structurally_equal(*ba.lhs, *bb.lhs) &&
           structurally_equal(*ba.rhs, *bb.rhs);
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

bool is_comparison(BinaryOp op) {
    switch (op) {
        case BinaryOp::eq:
        case BinaryOp::ne:
        case BinaryOp::lt:
        case BinaryOp::le:
        case BinaryOp::gt:
        case BinaryOp::ge: return true;
        default: return false;
    }
}

bool is_ordering(BinaryOp op) {
    return op == BinaryOp::lt || op == BinaryOp::le || op == BinaryOp::gt || op == BinaryOp::ge;
}

std::string_view type_name(ExprType t) {
    switch (t) {
        case ExprType::number: return "number";
        case ExprType::boolean: return "boolean";
        case ExprType::text: return "text";
        case ExprType::date: return "date";
    }
    return "?";
}

// Retypes a bare string literal to a date so date columns can be compared
// against quoted ISO dates.
bool coerce_literal_to_date(Expr& e) {
    auto* lit = std::get_if<Literal>(&e.node);
    if (!lit) return false;
    auto* s = std::get_if<std::string>(&lit->value);
    if (!s) return false;
    auto d = parse_date(*s);
    if (!d) throw ExprError("literal \"" + *s + "\" is not an ISO date");
    lit->value = *d;
    return true;
}

ExprType resolve_impl(Expr& e, const ColumnTypeLookup& lookup, const ResolveOptions& opts) {
    if (auto* lit = std::get_if<Literal>(&e.node)) {
        if (std::holds_alternative<std::int64_t>(lit->value) ||
            std::holds_alternative<double>(lit->value))
            return ExprType::number;
        if (std::holds_alternative<bool>(lit->value)) return ExprType::boolean;
        if (std::holds_alternative<Date>(lit->value)) return ExprType::date;
        return ExprType::text;
    }
    if (auto* ref = std::get_if<ColumnRef>(&e.node)) {
        if (opts.qualified_names && ref->table.empty())
            throw ExprError("cross-table expressions must qualify '" + ref->column +
                            "' as table.column");
        if (!opts.qualified_names && !ref->table.empty())
            throw ExprError("row rules reference columns without a table qualifier: '" +
                            ref->qualified() + "'");
        auto t = lookup(*ref);
        if (!t) throw ExprError("unknown column '" + ref->qualified() + "'");
        return *t;
    }
    if (auto* sum = std::get_if<SumExpr>(&e.node)) {
        if (!opts.allow_aggregates)
            throw ExprError("aggregate sum() is not allowed in a row rule");
        if (opts.qualified_names && sum->column.table.empty())
            throw ExprError("sum() needs a qualified table.column argument");
        auto t = lookup(sum->column);
        if (!t) throw ExprError("unknown column '" + sum->column.qualified() + "'");
        if (*t != ExprType::number)
            throw ExprError("sum() needs a numeric column, got " +
                            std::string(type_name(*t)) + " '" + sum->column.qualified() + "'");
        return ExprType::number;
    }
    if (auto* un = std::get_if<UnaryExpr>(&e.node)) {
        ExprType t = resolve_impl(*un->operand, lookup, opts);
        if (un->op == UnaryOp::negate) {
            if (t != ExprType::number)
                throw ExprError("unary '-' needs a number, got " + std::string(type_name(t)));
            return ExprType::number;
        }
        if (t != ExprType::boolean)
            throw ExprError("'not' needs a boolean, got " + std::string(type_name(t)));
        return ExprType::boolean;
    }
    auto& bin = std::get<BinaryExpr>(e.node);
    ExprType lt = resolve_impl(*bin.lhs, lookup, opts);
    ExprType rt = resolve_impl(*bin.rhs, lookup, opts);
    switch (bin.op) {
        case BinaryOp::add:
        case BinaryOp::sub:
        case BinaryOp::mul:
        case BinaryOp::div:
            if (lt != ExprType::number || rt != ExprType::number)
                throw ExprError(std::string("arithmetic '") + std::string(op_text(bin.op)) +
                                "' needs numbers, got " + std::string(type_name(lt)) + " and " +
                                std::string(type_name(rt)));
            return ExprType::number;
        case BinaryOp::logic_and:
        case BinaryOp::logic_or:
            if (lt != ExprType::boolean || rt != ExprType::boolean)
                throw ExprError(std::string("'") + std::string(op_text(bin.op)) +
                                "' needs booleans, got " + std::string(type_name(lt)) + " and " +
                                std::string(type_name(rt)));
            return ExprType::boolean;
        default: break;
    }
    // comparison
    if (lt == ExprType::date && rt == ExprType::text && coerce_literal_to_date(*bin.rhs))
        rt = ExprType::date;
    else if (rt == ExprType::date && lt == ExprType::text && coerce_literal_to_date(*bin.lhs))
        lt = ExprType::date;
    if (lt != rt)
        throw ExprError(std::string("comparison '") + std::string(op_text(bin.op)) +
                        "' mixes " + std::string(type_name(lt)) + " and " +
                        std::string(type_name(rt)));
    if (is_ordering(bin.op) && lt == ExprType::boolean)
        throw ExprError("booleans have no ordering");
    return ExprType::boolean;
}

}  // namespace

ExprType resolve(Expr& expr, const ColumnTypeLookup& lookup, const ResolveOptions& opts) {
    return resolve_impl(expr, lookup, opts);
}

void collect_columns(const Expr& expr, std::vector<ColumnRef>& plain,
                     std::vector<ColumnRef>& aggregated) {
    struct Visitor {
        std::vector<ColumnRef>& plain;
        std::vector<ColumnRef>& aggregated;
        void operator()(const Literal&) {}
        void operator()(const ColumnRef& ref) { plain.push_back(ref); }
        void operator()(const SumExpr& s) { aggregated.push_back(s.column); }
        void operator()(const UnaryExpr& u) { std::visit(*this, u.operand->node); }
        void operator()(const BinaryExpr& b) {
            std::visit(*this, b.lhs->node);
            std::visit(*this, b.rhs->node);
        }
    };
    std::visit(Visitor{plain, aggregated}, expr.node);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using EvalValue = std::variant<std::int64_t, double, bool, std::string, Date>;

double as_double(const EvalValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

bool is_number(const EvalValue& v) {
    return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

EvalValue arith(BinaryOp op, const EvalValue& l, const EvalValue& r) {
    if (op != BinaryOp::div && std::holds_alternative<std::int64_t>(l) &&
        std::holds_alternative<std::int64_t>(r)) {
        std::int64_t a = std::get<std::int64_t>(l), b = std::get<std::int64_t>(r), out = 0;
        bool overflow = false;
        switch (op) {
            case BinaryOp::add: overflow = __builtin_add_overflow(a, b, &out); break;
            case BinaryOp::sub: overflow = __builtin_sub_overflow(a, b, &out); break;
            case BinaryOp::mul: overflow = __builtin_mul_overflow(a, b, &out); break;
            default: break;
        }
        if (!overflow) return out;
    }
    double a = as_double(l), b = as_double(r);
    switch (op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return a / b;
        default: return 0.0;
    }
}

bool compare(BinaryOp op, const EvalValue& l, const EvalValue& r, double tolerance) {
    if (is_number(l) && is_number(r)) {
        double a = as_double(l), b = as_double(r);
        switch (op) {
            case BinaryOp::eq: return std::fabs(a - b) <= tolerance;
            case BinaryOp::ne: return std::fabs(a - b) > tolerance;
            case BinaryOp::lt: return a < b;
            case BinaryOp::le: return a <= b;
            case BinaryOp::gt: return a > b;
            case BinaryOp::ge: return a >= b;
            default: return false;
        }
    }
    auto ordered = [&](auto cmp) {
        if (const auto* ls = std::get_if<std::string>(&l))
            return cmp(*ls, std::get<std::string>(r));
        if (const auto* ld = std::get_if<Date>(&l)) return cmp(*ld, std::get<Date>(r));
        return cmp(std::get<bool>(l), std::get<bool>(r));
    };
    switch (op) {
        case BinaryOp::eq: return ordered([](const auto& a, const auto& b) { return a == b; });
        case BinaryOp::ne: return ordered([](const auto& a, const auto& b) { return a != b; });
        case BinaryOp::lt: return ordered([](const auto& a, const auto& b) { return a < b; });
        case BinaryOp::le: return ordered([](const auto& a, const auto& b) { return a <= b; });
        case BinaryOp::gt: return ordered([](const auto& a, const auto& b) { return a > b; });
        case BinaryOp::ge: return ordered([](const auto& a, const auto& b) { return a >= b; });
        default: return false;
    }
}

EvalValue eval_value(const Expr& e, const Binding& binding, double tolerance) {
    struct Visitor {
        const Binding& binding;
        double tolerance;
        EvalValue operator()(const Literal& lit) const {
            if (const auto* i = std::get_if<std::int64_t>(&lit.value)) return *i;
            if (const auto* d = std::get_if<double>(&lit.value)) return *d;
            if (const auto* b = std::get_if<bool>(&lit.value)) return *b;
            if (const auto* s = std::get_if<std::string>(&lit.value)) return *s;
            return std::get<Date>(lit.value);
        }
        EvalValue operator()(const ColumnRef& ref) const {
            auto v = binding.column(ref);  // presence pre-checked by eval_rule
            if (const auto* i = std::get_if<std::int64_t>(&*v)) return *i;
            if (const auto* d = std::get_if<double>(&*v)) return *d;
            if (const auto* b = std::get_if<bool>(&*v)) return *b;
            if (const auto* s = std::get_if<std::string>(&*v)) return *s;
            return std::get<Date>(*v);
        }
        EvalValue operator()(const SumExpr& s) const { return *binding.aggregate_sum(s.column); }
        EvalValue operator()(const UnaryExpr& u) const {
            EvalValue v = eval_value(*u.operand, binding, tolerance);
            if (u.op == UnaryOp::negate) {
                if (const auto* i = std::get_if<std::int64_t>(&v)) {
                    if (*i != INT64_MIN) return -*i;
                    return -static_cast<double>(*i);
                }
                return -std::get<double>(v);
            }
            return !std::get<bool>(v);
        }
        EvalValue operator()(const BinaryExpr& b) const {
            EvalValue l = eval_value(*b.lhs, binding, tolerance);
            EvalValue r = eval_value(*b.rhs, binding, tolerance);
            switch (b.op) {
                case BinaryOp::add:
                case BinaryOp::sub:
                case BinaryOp::mul:
                case BinaryOp::div: return arith(b.op, l, r);
                case BinaryOp::logic_and: return std::get<bool>(l) && std::get<bool>(r);
                case BinaryOp::logic_or: return std::get<bool>(l) || std::get<bool>(r);
                default: return compare(b.op, l, r, tolerance);
            }
        }
    };
    return std::visit(Visitor{binding, tolerance}, e.node);
}

}  // namespace

TriState eval_rule(const Expr& expr, const Binding& binding, double tolerance) {
    std::vector<ColumnRef> plain, aggregated;
    collect_columns(expr, plain, aggregated);
    for (const ColumnRef& ref : plain)
        if (!binding.column(ref)) return TriState::unknown;
    for (const ColumnRef& ref : aggregated)
        if (!binding.aggregate_sum(ref)) return TriState::unknown;
    EvalValue v = eval_value(expr, binding, tolerance);
    return std::get<bool>(v) ? TriState::holds : TriState::violated;
}

}  // namespace dq
