#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "morl/solution_set.hpp"
#include "morl/types.hpp"

namespace morl {

namespace detail {

/// Expression node for the monotone-utility spec. The primitive set is
/// deliberately small: sum, product, min, max, power, constants and
/// per-objective terms, in prefix notation.
struct UtilityExpr {
    enum class Op { constant, objective, add, mul, min, max, pow };
    Op op;
    double constant = 0.0;
    std::size_t objective = 0;
    std::unique_ptr<UtilityExpr> lhs, rhs;

    double eval(const ValueVector& v) const {
        switch (op) {
        case Op::constant: return constant;
        case Op::objective:
            if (objective >= v.size())
                throw std::invalid_argument("utility: objective index " + std::to_string(objective) +
                                            " out of range for d=" + std::to_string(v.size()));
            return v[objective];
        case Op::add: return lhs->eval(v) + rhs->eval(v);
        case Op::mul: return lhs->eval(v) * rhs->eval(v);
        case Op::min: return std::min(lhs->eval(v), rhs->eval(v));
        case Op::max: return std::max(lhs->eval(v), rhs->eval(v));
        case Op::pow: return std::pow(lhs->eval(v), rhs->eval(v));
        }
        return 0.0;
    }

    std::size_t min_dimension() const {
        std::size_t d = (op == Op::objective) ? objective + 1 : 0;
        if (lhs) d = std::max(d, lhs->min_dimension());
        if (rhs) d = std::max(d, rhs->min_dimension());
        return d;
    }

    void print(std::ostringstream& os) const {
        switch (op) {
        case Op::constant: os << constant; return;
        case Op::objective: os << "obj" << objective; return;
        case Op::add: os << "add "; break;
        case Op::mul: os << "mul "; break;
        case Op::min: os << "min "; break;
        case Op::max: os << "max "; break;
        case Op::pow: os << "pow "; break;
        }
        lhs->print(os);
        os << ' ';
        rhs->print(os);
    }
};

class UtilityParser {
public:
    explicit UtilityParser(const std::string& text) {
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) tokens_.push_back(tok);
    }

    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;

    std::string next() {
        if (pos_ >= tokens_.size()) throw std::invalid_argument("utility spec: unexpected end of input");
        return tokens_[pos_++];
    }

    std::unique_ptr<UtilityExpr> parse_expr() {
        const std::string tok = next();
        auto node = std::make_unique<UtilityExpr>();
        if (tok == "add" || tok == "sum") {
            node->op = UtilityExpr::Op::add;
        } else if (tok == "mul" || tok == "product") {
            node->op = UtilityExpr::Op::mul;
        } else if (tok == "min") {
            node->op = UtilityExpr::Op::min;
        } else if (tok == "max") {
            node->op = UtilityExpr::Op::max;
        } else if (tok == "pow") {
            node->op = UtilityExpr::Op::pow;
        } else if (tok.rfind("obj", 0) == 0) {
            node->op = UtilityExpr::Op::objective;
            node->objective = static_cast<std::size_t>(std::stoul(tok.substr(3)));
            return node;
        } else {
            node->op = UtilityExpr::Op::constant;
            std::size_t used = 0;
            node->constant = std::stod(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument("utility spec: bad token '" + tok + "'");
            return node;
        }
        node->lhs = parse_expr();
        node->rhs = parse_expr();
        return node;
    }

    /// "[0.5,0.5]" following a "dot" head.
    std::vector<double> parse_weight_list() {
        std::string rest;
        for (; pos_ < tokens_.size(); ++pos_) rest += tokens_[pos_];
        if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
            throw std::invalid_argument("utility spec: expected [w0,w1,...] after dot");
        std::vector<double> w;
        std::string body = rest.substr(1, rest.size() - 2);
        std::istringstream in(body);
        std::string item;
        while (std::getline(in, item, ','))
            w.push_back(std::stod(item));
        return w;
    }
};

} // namespace detail

/**
 * Scalarisation u: R^d -> R. Either linear (a validated weight vector,
 * serialised as "dot [w0,...]"), a monotone prefix expression over the
 * primitive set, or a native callable supplied at the API level (not
 * serialisable).
 *
 * Monotone expressions are checked on construction by sampling
 * u(v + delta*e_i) >= u(v) over a probe grid on [0,1]^d.
 */
class UtilityFunction {
public:
    enum class Kind { linear, monotone, native };

    static UtilityFunction linear(std::vector<double> weights) {
        UtilityFunction u;
        u.kind_ = Kind::linear;
        u.weights_ = std::make_shared<WeightVector>(std::move(weights));
        return u;
    }

    static UtilityFunction linear(const WeightVector& w) { return linear(w.weights()); }

    /// Parses a prefix-notation spec, e.g. "dot [0.5,0.5]" or "mul obj0 obj1".
    static UtilityFunction parse(const std::string& spec) {
        detail::UtilityParser p(spec);
        const std::string head = p.next();
        if (head == "dot") return linear(p.parse_weight_list());
        p.pos_ = 0;
        UtilityFunction u;
        u.kind_ = Kind::monotone;
        u.expr_ = std::shared_ptr<detail::UtilityExpr>(p.parse_expr().release());
        if (p.pos_ != p.tokens_.size())
            throw std::invalid_argument("utility spec: trailing tokens");
        if (!u.passes_monotonicity_probe())
            throw std::invalid_argument("utility spec '" + spec + "' failed the monotonicity check");
        return u;
    }

    static UtilityFunction from_callable(std::function<double(const ValueVector&)> fn) {
        UtilityFunction u;
        u.kind_ = Kind::native;
        u.fn_ = std::move(fn);
        return u;
    }

    double operator()(const ValueVector& v) const {
        double out;
        switch (kind_) {
        case Kind::linear: out = dot(weights_->weights(), v); break;
        case Kind::monotone: out = expr_->eval(v); break;
        case Kind::native: out = fn_(v); break;
        default: throw std::logic_error("UtilityFunction: empty");
        }
        if (!std::isfinite(out))
            throw std::domain_error("utility evaluation produced a non-finite value");
        return out;
    }

    Kind kind() const { return kind_; }
    bool is_linear() const { return kind_ == Kind::linear; }

    const WeightVector& weight_vector() const {
        if (kind_ != Kind::linear) throw std::logic_error("UtilityFunction: not linear");
        return *weights_;
    }

    /// Serialised prefix form; native callables cannot be serialised.
    std::string spec() const {
        std::ostringstream os;
        switch (kind_) {
        case Kind::linear: {
            os << "dot [";
            const auto& w = weights_->weights();
            for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
            os << "]";
            return os.str();
        }
        case Kind::monotone:
            expr_->print(os);
            return os.str();
        default:
            throw std::logic_error("UtilityFunction: native callable has no spec");
        }
    }

    /// Sampled monotonicity check on a probe grid over [lo, hi]^d.
    bool passes_monotonicity_probe(double lo = 0.0, double hi = 1.0) const {
        if (kind_ == Kind::linear) return true;
        const std::size_t d = std::max<std::size_t>(expr_ ? expr_->min_dimension() : 2, 2);
        std::size_t per_axis = 5;
        while (d >= 2 && std::pow(static_cast<double>(per_axis), static_cast<double>(d)) > 4096.0 &&
               per_axis > 2)
            --per_axis;
        const double step = (hi - lo) / static_cast<double>(per_axis - 1);
        const double delta = step / 2.0;
        ValueVector v(d, lo);
        std::vector<std::size_t> idx(d, 0);
        while (true) {
            for (std::size_t i = 0; i < d; ++i) v[i] = lo + step * static_cast<double>(idx[i]);
            const double base = expr_->eval(v);
            for (std::size_t i = 0; i < d; ++i) {
                ValueVector probe = v;
                probe[i] += delta;
                if (expr_->eval(probe) < base - 1e-12) return false;
            }
            std::size_t carry = 0;
            while (carry < d && ++idx[carry] == per_axis) idx[carry++] = 0;
            if (carry == d) break;
        }
        return true;
    }

private:
    Kind kind_ = Kind::native;
    std::shared_ptr<WeightVector> weights_;
    std::shared_ptr<detail::UtilityExpr> expr_;
    std::function<double(const ValueVector&)> fn_;
};

} // namespace morl
