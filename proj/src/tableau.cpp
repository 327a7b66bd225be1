#include "imexrelax/tableau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef IMEXRELAX_REGISTRY_PATH
#define IMEXRELAX_REGISTRY_PATH "data/schemes.txt"
#endif

namespace imexrelax {

namespace {

void check_shapes(const ButcherTableau& t, const std::string& label, ValidationReport& r) {
    const auto s = t.b.size();
    if (t.A.rows() != s || t.A.cols() != s)
        r.violations.push_back({label + ": A is not " + std::to_string(s) + "x" + std::to_string(s), 0.0});
    if (t.c.size() != s)
        r.violations.push_back({label + ": c has length " + std::to_string(t.c.size()), 0.0});
}

void check_row_sums(const ButcherTableau& t, const std::string& label, ValidationReport& r) {
    for (Eigen::Index i = 0; i < t.b.size(); ++i) {
        const double d = std::abs(t.A.row(i).sum() - t.c(i));
        if (d > kRowSumTol)
            r.violations.push_back({label + ": row-sum mismatch in row " + std::to_string(i + 1), d});
    }
}

}  // namespace

ValidationReport validate(const ImexTableau& t) {
    if (t.expl.b.size() != t.impl.b.size())
        throw StructuralError("explicit part has " + std::to_string(t.expl.b.size()) +
                              " stages, implicit part has " + std::to_string(t.impl.b.size()));
    ValidationReport r;
    check_shapes(t.expl, "explicit", r);
    check_shapes(t.impl, "implicit", r);
    if (!r.ok()) return r;

    const auto s = t.stages();
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = i; j < s; ++j) {
            if (t.expl.A(i, j) != 0.0)
                r.violations.push_back({"explicit: triangularity violated at (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + ")",
                                        std::abs(t.expl.A(i, j))});
            if (j > i && t.impl.A(i, j) != 0.0)
                r.violations.push_back({"implicit: triangularity violated at (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + ")",
                                        std::abs(t.impl.A(i, j))});
        }
    }
    check_row_sums(t.expl, "explicit", r);
    check_row_sums(t.impl, "implicit", r);
    return r;
}

Classification classify(const ImexTableau& t) {
    const auto& A = t.impl.A;
    const auto s = A.rows();
    auto diag_nonzero = [&](Eigen::Index from) {
        for (Eigen::Index i = from; i < s; ++i)
            if (std::abs(A(i, i)) <= kPivotTol) return false;
        return true;
    };
    if (diag_nonzero(0)) return {TableauClass::TypeA, "A invertible"};
    const bool first_row_zero = A.row(0).cwiseAbs().maxCoeff() <= kPivotTol;
    if (first_row_zero && diag_nonzero(1)) {
        const bool a_zero = s == 1 || A.col(0).tail(s - 1).cwiseAbs().maxCoeff() <= kPivotTol;
        if (a_zero) return {TableauClass::ARS, "zero first row, invertible trailing block, a = 0"};
        return {TableauClass::TypeCK, "zero first row, invertible trailing block, a != 0"};
    }
    throw UnclassifiableError("tableau '" + t.name + "' is neither Type A nor Type CK");
}

bool is_stiffly_accurate(const ButcherTableau& t) {
    const auto s = t.stages();
    return (t.A.row(s - 1).transpose() - t.b).cwiseAbs().maxCoeff() <= kStiffTol;
}

bool is_globally_stiffly_accurate(const ImexTableau& t) {
    const auto s = t.stages();
    return is_stiffly_accurate(t.expl) && is_stiffly_accurate(t.impl) &&
           std::abs(t.expl.c(s - 1) - 1.0) <= kStiffTol && std::abs(t.impl.c(s - 1) - 1.0) <= kStiffTol;
}

PropertyReport check_order_conditions(const ImexTableau& t, int target_order) {
    PropertyReport rep;
    rep.stiffly_accurate = is_stiffly_accurate(t.impl);
    rep.globally_stiffly_accurate = is_globally_stiffly_accurate(t);
    rep.nonstandard_coupling = (t.expl.c - t.impl.c).cwiseAbs().maxCoeff() > kRowSumTol;

    struct Part {
        const char* tag;
        const ButcherTableau* tab;
    };
    const std::array<Part, 2> parts{{{"~", &t.expl}, {"", &t.impl}}};

    std::array<bool, 4> ok{true, true, true, true};
    auto record = [&](int order, std::string id, double value, double exact) {
        const double res = std::abs(value - exact);
        if (res > kOrderTol) {
            ok[order] = false;
            if (order <= target_order) rep.failed_conditions.push_back({std::move(id), res});
        }
    };

    for (const auto& w : parts) record(1, std::string("sum b") + w.tag, w.tab->b.sum(), 1.0);
    for (const auto& w : parts)
        for (const auto& v : parts)
            record(2, std::string("b") + w.tag + ".c" + v.tag, w.tab->b.dot(v.tab->c), 0.5);
    if (target_order >= 3) {
        for (const auto& w : parts) {
            for (std::size_t p = 0; p < parts.size(); ++p)
                for (std::size_t q = p; q < parts.size(); ++q)
                    record(3, std::string("b") + w.tag + ".c" + parts[p].tag + "c" + parts[q].tag,
                           w.tab->b.dot(parts[p].tab->c.cwiseProduct(parts[q].tab->c)), 1.0 / 3.0);
            for (const auto& m : parts)
                for (const auto& v : parts)
                    record(3, std::string("b") + w.tag + ".A" + m.tag + "c" + v.tag,
                           w.tab->b.dot(m.tab->A * v.tab->c), 1.0 / 6.0);
        }
    }

    rep.satisfied_order = 0;
    for (int k = 1; k <= std::min(target_order, 3); ++k) {
        if (!ok[k]) break;
        rep.satisfied_order = k;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Registry format

namespace {

double parse_number(const std::string& tok, int line) {
    auto to_double = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty())
            throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
        return v;
    };
    const auto slash = tok.find('/');
    if (slash == std::string::npos) return to_double(tok);
    const double den = to_double(tok.substr(slash + 1));
    if (den == 0.0) throw ParseError("line " + std::to_string(line) + ": zero denominator in '" + tok + "'");
    return to_double(tok.substr(0, slash)) / den;
}

struct Row {
    int line;
    std::vector<double> values;
};

constexpr std::array<const char*, 6> kFields{"Atilde", "btilde", "ctilde", "A", "b", "c"};

}  // namespace

ImexTableau load_tableau(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string name;
    long s = -1;
    std::string current;
    std::map<std::string, std::vector<Row>> fields;

    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "scheme") {
            if (!name.empty()) throw ParseError("line " + std::to_string(lineno) + ": second scheme header in block");
            std::string kw;
            if (!(ls >> name >> kw >> s) || kw != "stages" || s < 0)
                throw ParseError("line " + std::to_string(lineno) + ": expected 'scheme <name> stages <s>'");
            continue;
        }
        if (name.empty()) throw ParseError("line " + std::to_string(lineno) + ": data before scheme header");
        if (!tok.empty() && tok.back() == ':') {
            current = tok.substr(0, tok.size() - 1);
            if (std::find(kFields.begin(), kFields.end(), current) == kFields.end())
                throw ParseError("line " + std::to_string(lineno) + ": unknown field '" + current + "'");
            if (fields.count(current))
                throw ParseError("line " + std::to_string(lineno) + ": duplicate field '" + current + "'");
            fields[current];
            if (!(ls >> tok)) continue;
        }
        if (current.empty()) throw ParseError("line " + std::to_string(lineno) + ": value outside any field");
        Row row{lineno, {}};
        do {
            row.values.push_back(parse_number(tok, lineno));
        } while (ls >> tok);
        fields[current].push_back(std::move(row));
    }

    if (name.empty()) throw ParseError("no scheme header");
    if (s == 0) throw ParseError("scheme '" + name + "': empty slot, no transcribed coefficients");

    auto matrix = [&](const char* key) {
        auto it = fields.find(key);
        if (it == fields.end()) throw ParseError("scheme '" + name + "': missing field '" + key + "'");
        if (static_cast<long>(it->second.size()) != s)
            throw ParseError("scheme '" + name + "': field '" + key + "' has " + std::to_string(it->second.size()) +
                             " rows, expected " + std::to_string(s));
        Eigen::MatrixXd M(s, s);
        for (long i = 0; i < s; ++i) {
            const auto& r = it->second[i];
            if (static_cast<long>(r.values.size()) != s)
                throw ParseError("line " + std::to_string(r.line) + ": field '" + key + "' row has " +
                                 std::to_string(r.values.size()) + " entries, expected " + std::to_string(s));
            for (long j = 0; j < s; ++j) M(i, j) = r.values[j];
        }
        return M;
    };
    auto vector = [&](const char* key) {
        auto it = fields.find(key);
        if (it == fields.end()) throw ParseError("scheme '" + name + "': missing field '" + key + "'");
        std::vector<double> all;
        for (const auto& r : it->second) all.insert(all.end(), r.values.begin(), r.values.end());
        if (static_cast<long>(all.size()) != s)
            throw ParseError("scheme '" + name + "': field '" + key + "' has " + std::to_string(all.size()) +
                             " entries, expected " + std::to_string(s));
        return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(all.data(), s));
    };

    ImexTableau t;
    t.name = name;
    t.expl = {matrix("Atilde"), vector("btilde"), vector("ctilde")};
    t.impl = {matrix("A"), vector("b"), vector("c")};
    const auto rep = validate(t);
    if (!rep.ok()) {
        std::string msg = "scheme '" + name + "' failed validation:";
        for (const auto& v : rep.violations) msg += " [" + v.what + "]";
        throw ParseError(msg);
    }
    return t;
}

TableauRegistry TableauRegistry::from_text(const std::string& text) {
    TableauRegistry reg;
    std::istringstream in(text);
    std::string raw, current, block;
    auto flush = [&] {
        if (!current.empty()) reg.blocks_[current] = block;
        block.clear();
    };
    while (std::getline(in, raw)) {
        std::istringstream ls(raw);
        std::string tok;
        if (ls >> tok && tok == "scheme") {
            flush();
            ls >> current;
            if (reg.blocks_.count(current)) throw ParseError("duplicate scheme '" + current + "'");
            reg.order_.push_back(current);
        }
        if (!current.empty()) block += raw + "\n";
    }
    flush();
    return reg;
}

TableauRegistry TableauRegistry::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open registry '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
}

bool TableauRegistry::contains(const std::string& name) const { return blocks_.count(name) != 0; }

ImexTableau TableauRegistry::get(const std::string& name) const {
    auto it = blocks_.find(name);
    if (it == blocks_.end()) throw ParseError("unknown scheme '" + name + "'");
    return load_tableau(it->second);
}

std::vector<std::string> TableauRegistry::names() const { return order_; }

std::string serialize(const ImexTableau& t) {
    std::ostringstream out;
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto mat = [&](const char* key, const Eigen::MatrixXd& M) {
        out << key << ":\n";
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? " " : "  ") << num(M(i, j));
            out << "\n";
        }
    };
    auto vec = [&](const char* key, const Eigen::VectorXd& v) {
        out << key << ":";
        for (Eigen::Index i = 0; i < v.size(); ++i) out << " " << num(v(i));
        out << "\n";
    };
    out << "scheme " << t.name << " stages " << t.stages() << "\n";
    mat("Atilde", t.expl.A);
    vec("btilde", t.expl.b);
    vec("ctilde", t.expl.c);
    mat("A", t.impl.A);
    vec("b", t.impl.b);
    vec("c", t.impl.c);
    return out.str();
}

std::string default_registry_path() { return IMEXRELAX_REGISTRY_PATH; }

}  // namespace imexrelax
