#include "nauticle/tensor.hpp"

#include <cmath>
#include <vector>

#include "nauticle/format.hpp"

namespace nauticle {

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Tensor& a, const Tensor& b) {
    throw runtime_error("operator '", op, "': incompatible shapes ", a.shape_string(), " and ",
                        b.shape_string());
}

template <typename Fn>
Tensor elementwise_unary(const Tensor& a, Fn fn) {
    Tensor::Storage m = a.mat().unaryExpr(fn);
    return Tensor(std::move(m));
}

// Same-shape elementwise with scalar broadcast on either side.
template <typename Fn>
Tensor elementwise_binary(const char* name, const Tensor& a, const Tensor& b, Fn fn) {
    if (a.is_scalar() && !b.is_scalar()) {
        double s = a(0, 0);
        return Tensor(Tensor::Storage(b.mat().unaryExpr([&](double x) { return fn(s, x); })));
    }
    if (b.is_scalar() && !a.is_scalar()) {
        double s = b(0, 0);
        return Tensor(Tensor::Storage(a.mat().unaryExpr([&](double x) { return fn(x, s); })));
    }
    if (!a.same_shape(b)) shape_mismatch(name, a, b);
    Tensor out = Tensor::zeros(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out(r, c) = fn(a(r, c), b(r, c));
    return out;
}

}  // namespace

Tensor operator+(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_mismatch("+", a, b);
    return Tensor(Tensor::Storage(a.mat() + b.mat()));
}

Tensor operator-(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_mismatch("-", a, b);
    return Tensor(Tensor::Storage(a.mat() - b.mat()));
}

Tensor operator-(const Tensor& a) { return Tensor(Tensor::Storage(-a.mat())); }

Tensor operator*(const Tensor& a, const Tensor& b) {
    if (a.is_scalar()) return Tensor(Tensor::Storage(a(0, 0) * b.mat()));
    if (b.is_scalar()) return Tensor(Tensor::Storage(b(0, 0) * a.mat()));
    if (a.cols() == b.rows()) return Tensor(Tensor::Storage(a.mat() * b.mat()));
    shape_mismatch("*", a, b);
}

Tensor operator/(const Tensor& a, const Tensor& b) {
    if (b.is_scalar()) return Tensor(Tensor::Storage(a.mat() / b(0, 0)));
    if (!a.same_shape(b)) shape_mismatch("/", a, b);
    return Tensor(Tensor::Storage(a.mat().cwiseQuotient(b.mat())));
}

Tensor pow(const Tensor& a, const Tensor& b) {
    return elementwise_binary("^", a, b, [](double x, double e) { return std::pow(x, e); });
}

Tensor compare(CompareOp op, const Tensor& a, const Tensor& b) {
    const char* name = "comparison";
    if (!a.is_scalar() || !b.is_scalar()) shape_mismatch(name, a, b);
    double x = a(0, 0), y = b(0, 0);
    bool r = false;
    switch (op) {
        case CompareOp::Less: r = x < y; break;
        case CompareOp::Greater: r = x > y; break;
        case CompareOp::LessEq: r = x <= y; break;
        case CompareOp::GreaterEq: r = x >= y; break;
        case CompareOp::Equal: r = x == y; break;
        case CompareOp::NotEqual: r = x != y; break;
    }
    return Tensor(r ? 1.0 : 0.0);
}

Tensor norm(const Tensor& a) { return Tensor(a.mat().norm()); }

Tensor exp(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::exp(x); }); }
Tensor log(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::log(x); }); }
Tensor sin(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::sin(x); }); }
Tensor cos(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::cos(x); }); }
Tensor tan(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::tan(x); }); }
Tensor sqrt(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::sqrt(x); }); }
Tensor abs(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::abs(x); }); }
Tensor floor(const Tensor& a) { return elementwise_unary(a, [](double x) { return std::floor(x); }); }
Tensor sgn(const Tensor& a) {
    return elementwise_unary(a, [](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
}

Tensor min2(const Tensor& a, const Tensor& b) {
    return elementwise_binary("min", a, b, [](double x, double y) { return std::fmin(x, y); });
}

Tensor max2(const Tensor& a, const Tensor& b) {
    return elementwise_binary("max", a, b, [](double x, double y) { return std::fmax(x, y); });
}

Tensor dot(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_mismatch("dot", a, b);
    return Tensor(a.mat().cwiseProduct(b.mat()).sum());
}

Tensor mirror(const Tensor& value, const Tensor& guide) {
    if (value.is_scalar()) return value;
    if (!guide.is_column()) throw runtime_error("mirror: guide must be a column of axis signs");
    Tensor out = value;
    for (int r = 0; r < value.rows(); ++r)
        for (int c = 0; c < value.cols(); ++c) {
            double srow = r < guide.rows() ? guide(r) : 1.0;
            double scol = (value.cols() == 1 || c >= guide.rows()) ? 1.0 : guide(c);
            out(r, c) = value(r, c) * srow * scol;
        }
    return out;
}

std::string to_string(const Tensor& t) {
    std::string out;
    for (int r = 0; r < t.rows(); ++r) {
        if (r > 0) out += ';';
        for (int c = 0; c < t.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(t(r, c));
        }
    }
    if (t.cols() == 1 && t.rows() > 1) {
        // Columns use the deck-facing separator.
        out.clear();
        for (int r = 0; r < t.rows(); ++r) {
            if (r > 0) out += '|';
            out += format_double(t(r));
        }
    }
    return out;
}

Tensor parse_tensor(std::string_view text) {
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string_view> parts;
        size_t start = 0;
        while (true) {
            size_t p = s.find(sep, start);
            if (p == std::string_view::npos) {
                parts.push_back(s.substr(start));
                break;
            }
            parts.push_back(s.substr(start, p - start));
            start = p + 1;
        }
        return parts;
    };
    bool ok = true;
    if (text.find(';') != std::string_view::npos || text.find(',') != std::string_view::npos) {
        auto rows = split(text, ';');
        int nr = static_cast<int>(rows.size());
        int nc = static_cast<int>(split(rows[0], ',').size());
        Tensor out = Tensor::zeros(nr, nc);
        for (int r = 0; r < nr; ++r) {
            auto cells = split(rows[r], ',');
            if (static_cast<int>(cells.size()) != nc)
                throw io_error("ragged tensor literal '", std::string(text), "'");
            for (int c = 0; c < nc; ++c) {
                out(r, c) = parse_double(cells[c], ok);
                if (!ok) throw io_error("bad number '", std::string(cells[c]), "' in tensor literal");
            }
        }
        return out;
    }
    auto comps = split(text, '|');
    Tensor out = Tensor::zeros(static_cast<int>(comps.size()), 1);
    for (size_t r = 0; r < comps.size(); ++r) {
        out(static_cast<int>(r)) = parse_double(comps[r], ok);
        if (!ok) throw io_error("bad number '", std::string(comps[r]), "' in tensor literal");
    }
    return out;
}

}  // namespace nauticle
