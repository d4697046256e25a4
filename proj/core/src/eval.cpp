#include "gridlens/eval.hpp"

#include <cmath>
#include <deque>

#include "builtins.hpp"
#include "coerce.hpp"
#include "gridlens/error.hpp"
#include "scc.hpp"

namespace gridlens {

namespace {

// A formula with its references bound to slots.
struct Bound {
    enum class Kind : std::uint8_t { Constant, Slot, Range, Unary, Binary, If, Call };
    Kind kind = Kind::Constant;
    UnaryOperator unary_op = UnaryOperator::Minus;
    BinaryOperator binary_op = BinaryOperator::Add;
    std::size_t index = 0;  // slot or range
    detail::Builtin fn = nullptr;
    Value constant;
    std::vector<Bound> kids;
};

struct RangeSlots {
    int rows = 0;
    int columns = 0;
    std::vector<std::size_t> slots;
};

}  // namespace

struct CompiledModel::Impl {
    std::vector<CellAddress> addresses;
    std::map<CellAddress, std::size_t> index;
    std::vector<Value> initial;
    std::vector<char> formula;
    std::vector<Bound> program;  // per slot; Constant for non-formula slots
    std::vector<RangeSlots> ranges;
    std::vector<std::size_t> order;     // formula slots, topological
    std::vector<std::size_t> reported;  // slots in an EvaluationResult
    std::set<CellAddress> workbook_formulas;
    std::vector<std::vector<CellAddress>> cycles;
};

namespace {

using detail::compare;
using detail::finite_or_error;
using detail::scalar;
using detail::to_number;
using detail::to_text;

class Compiler {
public:
    Compiler(const Workbook& wb, CompiledModel::Impl& m) : wb_(wb), names_(wb.resolver()), m_(m) {}

    std::size_t slot_for(const CellAddress& a) {
        if (auto it = m_.index.find(a); it != m_.index.end()) return it->second;
        std::size_t slot = m_.addresses.size();
        m_.addresses.push_back(a);
        m_.index.emplace(a, slot);
        const Cell* c = wb_.find_cell(a);
        if (c && c->is_formula()) {
            m_.initial.emplace_back();
            m_.formula.push_back(1);
            pending_.push_back(slot);
        } else {
            m_.initial.push_back(c ? c->literal() : Value());
            m_.formula.push_back(0);
        }
        m_.program.emplace_back();
        return slot;
    }

    void drain() {
        while (!pending_.empty()) {
            std::size_t slot = pending_.front();
            pending_.pop_front();
            const Cell* c = wb_.find_cell(m_.addresses[slot]);
            Bound b = bind(c->formula().ast);
            m_.program[slot] = std::move(b);
        }
    }

private:
    static Bound constant(Value v) {
        Bound b;
        b.constant = std::move(v);
        return b;
    }

    Bound bind_cell(const CellAddress& a) {
        if (!wb_.has_sheet(a.sheet)) return constant(Value(ErrorKind::Ref));
        Bound b;
        b.kind = Bound::Kind::Slot;
        b.index = slot_for(a);
        return b;
    }

    Bound bind_range(const CellRange& r) {
        if (!wb_.has_sheet(r.sheet())) return constant(Value(ErrorKind::Ref));
        auto [it, inserted] = range_index_.try_emplace(r, m_.ranges.size());
        if (inserted) {
            RangeSlots rs{r.rows(), r.columns(), {}};
            rs.slots.reserve(r.size());
            for (const auto& member : r.members()) rs.slots.push_back(slot_for(member));
            m_.ranges.push_back(std::move(rs));
        }
        Bound b;
        b.kind = Bound::Kind::Range;
        b.index = it->second;
        return b;
    }

    Bound bind(const Expr& e) {
        if (auto* n = std::get_if<NumberLit>(&e.node)) return constant(Value(n->value));
        if (auto* t = std::get_if<TextLit>(&e.node)) return constant(Value(t->value));
        if (auto* bl = std::get_if<BoolLit>(&e.node)) return constant(Value(bl->value));
        if (auto* c = std::get_if<CellRef>(&e.node)) return bind_cell(c->address);
        if (auto* r = std::get_if<RangeRef>(&e.node)) return bind_range(r->range);
        if (auto* nr = std::get_if<NameRef>(&e.node)) {
            auto it = names_.find(to_upper(nr->name));
            if (it == names_.end()) return constant(Value(ErrorKind::Name));
            if (auto* a = std::get_if<CellAddress>(&it->second)) return bind_cell(*a);
            return bind_range(std::get<CellRange>(it->second));
        }
        Bound b;
        if (auto* u = std::get_if<UnaryOp>(&e.node)) {
            b.kind = Bound::Kind::Unary;
            b.unary_op = u->op;
            b.kids.push_back(bind(u->operand.front()));
            return b;
        }
        if (auto* bin = std::get_if<BinaryOp>(&e.node)) {
            b.kind = Bound::Kind::Binary;
            b.binary_op = bin->op;
            b.kids.push_back(bind(bin->operands[0]));
            b.kids.push_back(bind(bin->operands[1]));
            return b;
        }
        const auto& f = std::get<FunctionCall>(e.node);
        if (f.name == "IF") {
            b.kind = Bound::Kind::If;
        } else {
            b.kind = Bound::Kind::Call;
            b.fn = detail::find_builtin(f.name);
        }
        for (const auto& a : f.args) b.kids.push_back(bind(a));
        if (b.kind == Bound::Kind::Call && !b.fn) return constant(Value(ErrorKind::Name));
        return b;
    }

    const Workbook& wb_;
    NameResolver names_;
    CompiledModel::Impl& m_;
    std::deque<std::size_t> pending_;
    std::map<CellRange, std::size_t> range_index_;
};

void collect_slots(const Bound& b, const CompiledModel::Impl& m, std::vector<std::size_t>& out) {
    if (b.kind == Bound::Kind::Slot) out.push_back(b.index);
    else if (b.kind == Bound::Kind::Range)
        out.insert(out.end(), m.ranges[b.index].slots.begin(), m.ranges[b.index].slots.end());
    for (const auto& k : b.kids) collect_slots(k, m, out);
}

class Machine {
public:
    Machine(const CompiledModel::Impl& m, const std::vector<Value>& values) : m_(m), v_(values) {}

    Value eval(const Bound& b) const {
        switch (b.kind) {
            case Bound::Kind::Constant: return b.constant;
            case Bound::Kind::Slot: return v_[b.index];
            case Bound::Kind::Range: return scalar(grid(b.index));
            case Bound::Kind::Unary: return unary(b);
            case Bound::Kind::Binary: return binary(b);
            case Bound::Kind::If: return if_(b);
            case Bound::Kind::Call: {
                std::vector<Operand> args;
                args.reserve(b.kids.size());
                for (const auto& k : b.kids) args.push_back(argument(k));
                return b.fn(args);
            }
        }
        return Value(ErrorKind::Value);
    }

private:
    Grid grid(std::size_t range) const {
        const RangeSlots& r = m_.ranges[range];
        Grid g{r.rows, r.columns, {}};
        g.cells.reserve(r.slots.size());
        for (std::size_t s : r.slots) g.cells.push_back(v_[s]);
        return g;
    }

    // References passed to functions keep reference semantics, so a single
    // cell is handed over as a 1x1 grid.
    Operand argument(const Bound& b) const {
        if (b.kind == Bound::Kind::Range) return grid(b.index);
        if (b.kind == Bound::Kind::Slot) return Grid{1, 1, {v_[b.index]}};
        return eval(b);
    }

    Value unary(const Bound& b) const {
        Value x = eval(b.kids[0]);
        if (b.unary_op == UnaryOperator::Plus) return x;
        auto n = to_number(x);
        if (auto* e = std::get_if<ErrorKind>(&n)) return Value(*e);
        return Value(-std::get<double>(n));
    }

    Value if_(const Bound& b) const {
        if (b.kids.size() < 2 || b.kids.size() > 3) return Value(ErrorKind::Value);
        auto c = detail::to_bool(eval(b.kids[0]));
        if (auto* e = std::get_if<ErrorKind>(&c)) return Value(*e);
        if (std::get<bool>(c)) return eval(b.kids[1]);
        return b.kids.size() == 3 ? eval(b.kids[2]) : Value(false);
    }

    Value binary(const Bound& b) const {
        Value lhs = eval(b.kids[0]);
        Value rhs = eval(b.kids[1]);
        if (lhs.is_error()) return lhs;
        if (rhs.is_error()) return rhs;
        switch (b.binary_op) {
            case BinaryOperator::Concat: return Value(to_text(lhs) + to_text(rhs));
            case BinaryOperator::Equal: return Value(compare(lhs, rhs) == 0);
            case BinaryOperator::NotEqual: return Value(compare(lhs, rhs) != 0);
            case BinaryOperator::Less: return Value(compare(lhs, rhs) < 0);
            case BinaryOperator::LessEqual: return Value(compare(lhs, rhs) <= 0);
            case BinaryOperator::Greater: return Value(compare(lhs, rhs) > 0);
            case BinaryOperator::GreaterEqual: return Value(compare(lhs, rhs) >= 0);
            default: break;
        }
        auto ln = to_number(lhs);
        if (auto* e = std::get_if<ErrorKind>(&ln)) return Value(*e);
        auto rn = to_number(rhs);
        if (auto* e = std::get_if<ErrorKind>(&rn)) return Value(*e);
        double x = std::get<double>(ln);
        double y = std::get<double>(rn);
        switch (b.binary_op) {
            case BinaryOperator::Add: return finite_or_error(x + y);
            case BinaryOperator::Subtract: return finite_or_error(x - y);
            case BinaryOperator::Multiply: return finite_or_error(x * y);
            case BinaryOperator::Divide:
                if (y == 0) return Value(ErrorKind::Div0);
                return finite_or_error(x / y);
            case BinaryOperator::Power:
                if (x == 0 && y < 0) return Value(ErrorKind::Div0);
                return finite_or_error(std::pow(x, y));
            default: return Value(ErrorKind::Value);
        }
    }

    const CompiledModel::Impl& m_;
    const std::vector<Value>& v_;
};

}  // namespace

CompiledModel::CompiledModel(const Workbook& wb, const std::set<CellAddress>* scope) {
    auto m = std::make_shared<Impl>();
    Compiler compiler(wb, *m);
    for (const auto& sheet : wb.sheets())
        for (const auto& [addr, c] : sheet.cells)
            if (c.is_formula()) m->workbook_formulas.insert(addr);

    if (scope) {
        for (const auto& a : *scope) m->reported.push_back(compiler.slot_for(a));
    } else {
        for (const auto& sheet : wb.sheets())
            for (const auto& [addr, c] : sheet.cells) compiler.slot_for(addr);
    }
    compiler.drain();
    if (!scope) {
        m->reported.resize(m->addresses.size());
        for (std::size_t i = 0; i < m->reported.size(); ++i) m->reported[i] = i;
    }

    // Topological order over formula slots (Kahn).
    const std::size_t n = m->addresses.size();
    std::vector<std::vector<std::size_t>> precedents(n), dependents(n);
    std::vector<std::size_t> pending_inputs(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (!m->formula[s]) continue;
        std::vector<std::size_t> deps;
        collect_slots(m->program[s], *m, deps);
        std::sort(deps.begin(), deps.end());
        deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
        for (std::size_t d : deps) {
            if (!m->formula[d]) continue;
            precedents[s].push_back(d);
            dependents[d].push_back(s);
            ++pending_inputs[s];
        }
    }
    std::deque<std::size_t> ready;
    for (std::size_t s = 0; s < n; ++s)
        if (m->formula[s] && pending_inputs[s] == 0) ready.push_back(s);
    std::vector<char> done(n, 0);
    while (!ready.empty()) {
        std::size_t s = ready.front();
        ready.pop_front();
        m->order.push_back(s);
        done[s] = 1;
        for (std::size_t d : dependents[s])
            if (--pending_inputs[d] == 0) ready.push_back(d);
    }

    // Whatever Kahn could not schedule is on or downstream of a cycle.
    std::vector<char> stuck(n, 0);
    bool any = false;
    for (std::size_t s = 0; s < n; ++s) {
        if (m->formula[s] && !done[s]) {
            stuck[s] = 1;
            any = true;
            m->initial[s] = Value(ErrorKind::Cycle);
        }
    }
    if (any) {
        for (const auto& comp : detail::cyclic_components(precedents, stuck)) {
            std::vector<CellAddress> cyc;
            for (std::size_t s : comp) cyc.push_back(m->addresses[s]);
            std::sort(cyc.begin(), cyc.end());
            m->cycles.push_back(std::move(cyc));
        }
    }
    impl_ = std::move(m);
}

std::size_t CompiledModel::slot_count() const noexcept { return impl_->addresses.size(); }

std::optional<std::size_t> CompiledModel::slot_of(const CellAddress& a) const {
    auto it = impl_->index.find(a);
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
}

const CellAddress& CompiledModel::address_of(std::size_t slot) const { return impl_->addresses.at(slot); }
bool CompiledModel::is_formula(std::size_t slot) const { return impl_->formula.at(slot) != 0; }
const std::vector<std::vector<CellAddress>>& CompiledModel::cycles() const noexcept { return impl_->cycles; }
const std::vector<Value>& CompiledModel::initial_values() const noexcept { return impl_->initial; }

void CompiledModel::evaluate_into(std::span<const std::pair<std::size_t, Value>> overrides,
                                  std::vector<Value>& values) const {
    const Impl& m = *impl_;
    values = m.initial;
    for (const auto& [slot, v] : overrides) {
        if (slot >= values.size()) throw OverlayTargetError("override slot out of range");
        if (m.formula[slot])
            throw OverlayTargetError("override targets formula cell " + format_address(m.addresses[slot]));
        values[slot] = v;
    }
    Machine machine(m, values);
    for (std::size_t s : m.order) {
        Value v = machine.eval(m.program[s]);
        // A formula that yields an empty reference shows 0.
        values[s] = v.is_blank() ? Value(0.0) : std::move(v);
    }
}

EvaluationResult CompiledModel::evaluate(const ScenarioOverlay& overlay) const {
    const Impl& m = *impl_;
    std::vector<std::pair<std::size_t, Value>> overrides;
    for (const auto& [addr, v] : overlay.overrides) {
        if (m.workbook_formulas.contains(addr))
            throw OverlayTargetError("override targets formula cell " + format_address(addr));
        if (auto slot = slot_of(addr)) overrides.emplace_back(*slot, v);
    }
    std::vector<Value> values;
    evaluate_into(overrides, values);

    EvaluationResult out;
    out.cycles = m.cycles;
    for (std::size_t s : m.reported) {
        out.values.emplace(m.addresses[s], values[s]);
        if (m.formula[s] && values[s].is_error()) out.diagnostics.emplace_back(m.addresses[s], values[s].error());
    }
    std::sort(out.diagnostics.begin(), out.diagnostics.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

const Value& EvaluationResult::at(const CellAddress& a) const {
    static const Value blank;
    auto it = values.find(a);
    return it == values.end() ? blank : it->second;
}

EvaluationResult evaluate(const Workbook& wb, const std::set<CellAddress>* scope, const ScenarioOverlay* overlay) {
    CompiledModel model(wb, scope);
    if (!model.cycles().empty()) {
        std::vector<std::string> cells;
        for (const auto& a : model.cycles().front()) cells.push_back(format_address(a));
        throw CycleError(std::move(cells));
    }
    return model.evaluate(overlay ? *overlay : ScenarioOverlay{});
}

}  // namespace gridlens
