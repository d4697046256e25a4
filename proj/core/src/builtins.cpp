#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#include "builtins.hpp"
#include "coerce.hpp"
#include "gridlens/formula.hpp"

namespace gridlens {

namespace detail {
namespace {

using Args = std::span<const Operand>;

Value value_error() { return Value(ErrorKind::Value); }

// Numbers of every argument for SUM-like functions. Cells in ranges that
// are not numbers are skipped; scalar arguments are coerced.
std::optional<ErrorKind> gather_numbers(Args args, std::vector<double>& out) {
    for (const auto& a : args) {
        if (auto* g = std::get_if<Grid>(&a)) {
            for (const auto& c : g->cells) {
                if (c.is_error()) return c.error();
                if (c.is_number()) out.push_back(c.number());
            }
            continue;
        }
        const Value& v = std::get<Value>(a);
        if (v.is_blank()) continue;
        auto n = to_number(v);
        if (auto* e = std::get_if<ErrorKind>(&n)) return *e;
        out.push_back(std::get<double>(n));
    }
    return std::nullopt;
}

Value fn_sum(Args args) {
    std::vector<double> xs;
    if (auto e = gather_numbers(args, xs)) return Value(*e);
    double s = 0;
    for (double x : xs) s += x;
    return finite_or_error(s);
}

Value fn_min(Args args) {
    std::vector<double> xs;
    if (auto e = gather_numbers(args, xs)) return Value(*e);
    if (xs.empty()) return Value(0.0);
    double m = xs.front();
    for (double x : xs) m = std::min(m, x);
    return Value(m);
}

Value fn_max(Args args) {
    std::vector<double> xs;
    if (auto e = gather_numbers(args, xs)) return Value(*e);
    if (xs.empty()) return Value(0.0);
    double m = xs.front();
    for (double x : xs) m = std::max(m, x);
    return Value(m);
}

Value fn_average(Args args) {
    std::vector<double> xs;
    if (auto e = gather_numbers(args, xs)) return Value(*e);
    if (xs.empty()) return Value(ErrorKind::Div0);
    double s = 0;
    for (double x : xs) s += x;
    return finite_or_error(s / static_cast<double>(xs.size()));
}

Value fn_abs(Args args) {
    if (args.size() != 1) return value_error();
    auto n = to_number(scalar(args[0]));
    if (auto* e = std::get_if<ErrorKind>(&n)) return Value(*e);
    return Value(std::fabs(std::get<double>(n)));
}

// Rounds |x| up at `digits` decimals. The scaled magnitude is first cut to
// 15 significant digits so that 0.3*10 does not ceil to 4.
double round_away(double x, int digits) {
    double scale = std::pow(10.0, digits);
    double scaled = std::fabs(x) * scale;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", scaled);
    scaled = std::strtod(buf, nullptr);
    double r = std::ceil(scaled) / scale;
    return x < 0 ? -r : r;
}

Value fn_roundup(Args args) {
    if (args.size() != 2) return value_error();
    auto n = to_number(scalar(args[0]));
    if (auto* e = std::get_if<ErrorKind>(&n)) return Value(*e);
    auto d = to_number(scalar(args[1]));
    if (auto* e = std::get_if<ErrorKind>(&d)) return Value(*e);
    double digits = std::trunc(std::get<double>(d));
    if (std::fabs(digits) > 300) return value_error();
    return finite_or_error(round_away(std::get<double>(n), static_cast<int>(digits)));
}

Value fn_if(Args args) {
    if (args.size() < 2 || args.size() > 3) return value_error();
    auto c = to_bool(scalar(args[0]));
    if (auto* e = std::get_if<ErrorKind>(&c)) return Value(*e);
    if (std::get<bool>(c)) return scalar(args[1]);
    return args.size() == 3 ? scalar(args[2]) : Value(false);
}

Value fn_iserror(Args args) {
    if (args.size() != 1) return value_error();
    return Value(scalar(args[0]).is_error());
}

Value fn_isnumber(Args args) {
    if (args.size() != 1) return value_error();
    return Value(scalar(args[0]).is_number());
}

Value fn_type(Args args) {
    if (args.size() != 1) return value_error();
    if (auto* g = std::get_if<Grid>(&args[0]); g && g->cells.size() > 1) return Value(64.0);
    Value v = scalar(args[0]);
    if (v.is_text()) return Value(2.0);
    if (v.is_bool()) return Value(4.0);
    if (v.is_error()) return Value(16.0);
    return Value(1.0);
}

Value fn_and(Args args) {
    if (args.empty()) return value_error();
    bool seen = false;
    bool result = true;
    for (const auto& a : args) {
        if (auto* g = std::get_if<Grid>(&a)) {
            for (const auto& c : g->cells) {
                if (c.is_error()) return c;
                if (c.is_bool()) seen = true, result = result && c.boolean();
                else if (c.is_number()) seen = true, result = result && c.number() != 0;
            }
            continue;
        }
        const Value& v = std::get<Value>(a);
        if (v.is_blank()) continue;
        auto b = to_bool(v);
        if (auto* e = std::get_if<ErrorKind>(&b)) return Value(*e);
        seen = true;
        result = result && std::get<bool>(b);
    }
    if (!seen) return value_error();
    return Value(result);
}

bool same_class(const Value& a, const Value& b) {
    return (a.is_number() && b.is_number()) || (a.is_text() && b.is_text()) || (a.is_bool() && b.is_bool());
}

enum class MatchMode { Exact, Ascending, Descending };

// 0-based position in `cells` per MATCH semantics; nullopt when not found.
std::optional<std::size_t> locate(const Value& key, const std::vector<Value>& cells, MatchMode mode) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Value& c = cells[i];
        if (!same_class(key, c)) continue;
        int cmp = compare(c, key);
        switch (mode) {
            case MatchMode::Exact:
                if (cmp == 0) return i;
                break;
            case MatchMode::Ascending:
                if (cmp <= 0) found = i;
                break;
            case MatchMode::Descending:
                if (cmp >= 0) found = i;
                break;
        }
    }
    return found;
}

Grid as_grid(const Operand& op) {
    if (auto* g = std::get_if<Grid>(&op)) return *g;
    return Grid{1, 1, {std::get<Value>(op)}};
}

Value fn_match(Args args) {
    if (args.size() < 2 || args.size() > 3) return value_error();
    Value key = scalar(args[0]);
    if (key.is_error()) return key;
    if (key.is_blank()) return Value(ErrorKind::NA);
    Grid g = as_grid(args[1]);
    if (g.rows != 1 && g.columns != 1) return Value(ErrorKind::NA);
    MatchMode mode = MatchMode::Ascending;
    if (args.size() == 3) {
        auto t = to_number(scalar(args[2]));
        if (auto* e = std::get_if<ErrorKind>(&t)) return Value(*e);
        double type = std::get<double>(t);
        mode = type == 0 ? MatchMode::Exact : (type > 0 ? MatchMode::Ascending : MatchMode::Descending);
    }
    auto pos = locate(key, g.cells, mode);
    if (!pos) return Value(ErrorKind::NA);
    return Value(static_cast<double>(*pos + 1));
}

Value lookup(Args args, bool vertical) {
    if (args.size() < 3 || args.size() > 4) return value_error();
    Value key = scalar(args[0]);
    if (key.is_error()) return key;
    if (key.is_blank()) return Value(ErrorKind::NA);
    Grid g = as_grid(args[1]);
    auto idx = to_number(scalar(args[2]));
    if (auto* e = std::get_if<ErrorKind>(&idx)) return Value(*e);
    double index = std::trunc(std::get<double>(idx));
    if (index < 1) return value_error();
    if (index > (vertical ? g.columns : g.rows)) return Value(ErrorKind::Ref);
    bool approximate = true;
    if (args.size() == 4) {
        auto b = to_bool(scalar(args[3]));
        if (auto* e = std::get_if<ErrorKind>(&b)) return Value(*e);
        approximate = std::get<bool>(b);
    }
    std::vector<Value> keys;
    int n = vertical ? g.rows : g.columns;
    keys.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) keys.push_back(vertical ? g.at(i, 0) : g.at(0, i));
    auto pos = locate(key, keys, approximate ? MatchMode::Ascending : MatchMode::Exact);
    if (!pos) return Value(ErrorKind::NA);
    int k = static_cast<int>(index) - 1;
    int p = static_cast<int>(*pos);
    return vertical ? g.at(p, k) : g.at(k, p);
}

Value fn_vlookup(Args args) { return lookup(args, true); }
Value fn_hlookup(Args args) { return lookup(args, false); }

struct Criterion {
    enum class Op { Eq, Ne, Lt, Le, Gt, Ge } op = Op::Eq;
    Value operand;

    bool test(const Value& c) const {
        const Value& x = operand;
        if (c.is_error()) return false;
        if (x.is_text() && x.text().empty()) {
            bool empty = c.is_blank() || (c.is_text() && c.text().empty());
            return op == Op::Ne ? !empty : (op == Op::Eq && empty);
        }
        if (!same_class(x, c)) return op == Op::Ne;
        int cmp = compare(c, x);
        switch (op) {
            case Op::Eq: return cmp == 0;
            case Op::Ne: return cmp != 0;
            case Op::Lt: return cmp < 0;
            case Op::Le: return cmp <= 0;
            case Op::Gt: return cmp > 0;
            case Op::Ge: return cmp >= 0;
        }
        return false;
    }
};

Criterion parse_criterion(const Value& v) {
    if (!v.is_text()) return {Criterion::Op::Eq, v.is_blank() ? Value(std::string{}) : v};
    std::string_view s = v.text();
    Criterion c;
    static const std::pair<std::string_view, Criterion::Op> prefixes[] = {
        {"<=", Criterion::Op::Le}, {">=", Criterion::Op::Ge}, {"<>", Criterion::Op::Ne},
        {"<", Criterion::Op::Lt},  {">", Criterion::Op::Gt},  {"=", Criterion::Op::Eq},
    };
    for (const auto& [p, op] : prefixes) {
        if (s.starts_with(p)) {
            c.op = op;
            s.remove_prefix(p.size());
            break;
        }
    }
    if (auto x = parse_number_text(s)) {
        c.operand = Value(*x);
    } else if (std::string upper = to_upper(s); upper == "TRUE" || upper == "FALSE") {
        c.operand = Value(upper == "TRUE");
    } else {
        c.operand = Value(std::string(s));
    }
    return c;
}

Value fn_sumif(Args args) {
    if (args.size() < 2 || args.size() > 3) return value_error();
    Grid range = as_grid(args[0]);
    Value crit = scalar(args[1]);
    if (crit.is_error()) return crit;
    Criterion c = parse_criterion(crit);
    Grid sum = args.size() == 3 ? as_grid(args[2]) : range;
    double total = 0;
    for (int r = 0; r < range.rows; ++r) {
        for (int col = 0; col < range.columns; ++col) {
            if (!c.test(range.at(r, col))) continue;
            if (r >= sum.rows || col >= sum.columns) continue;
            const Value& v = sum.at(r, col);
            if (v.is_error()) return v;
            if (v.is_number()) total += v.number();
        }
    }
    return finite_or_error(total);
}

const std::map<std::string, Builtin, std::less<>>& table() {
    static const std::map<std::string, Builtin, std::less<>> fns{
        {"ABS", fn_abs},         {"AND", fn_and},         {"AVERAGE", fn_average}, {"HLOOKUP", fn_hlookup},
        {"IF", fn_if},           {"ISERROR", fn_iserror}, {"ISNUMBER", fn_isnumber}, {"MATCH", fn_match},
        {"MAX", fn_max},         {"MIN", fn_min},         {"ROUNDUP", fn_roundup}, {"SUM", fn_sum},
        {"SUMIF", fn_sumif},     {"TYPE", fn_type},       {"VLOOKUP", fn_vlookup},
    };
    return fns;
}

}  // namespace

Builtin find_builtin(std::string_view upper_name) {
    const auto& fns = table();
    auto it = fns.find(upper_name);
    return it == fns.end() ? nullptr : it->second;
}

}  // namespace detail

Value call_builtin(std::string_view name, std::span<const Operand> args) {
    auto fn = detail::find_builtin(to_upper(name));
    if (!fn) return Value(ErrorKind::Name);
    return fn(args);
}

}  // namespace gridlens
