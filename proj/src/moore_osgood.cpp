#include "bsdelab/moore_osgood.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bsdelab {

void DoubleTable::validate() const {
    if (cells.empty() || cells.front().empty())
        throw std::invalid_argument("DoubleTable: empty table");
    for (const auto& r : cells)
        if (r.size() != cells.front().size())
            throw std::invalid_argument("DoubleTable: ragged rows");
    if (!row_labels.empty() && row_labels.size() != rows())
        throw std::invalid_argument("DoubleTable: row label count mismatch");
    if (!col_labels.empty() && col_labels.size() != cols())
        throw std::invalid_argument("DoubleTable: column label count mismatch");
    if (row_limits && row_limits->size() != rows())
        throw std::invalid_argument("DoubleTable: row limit count mismatch");
    if (col_limits && col_limits->size() != cols())
        throw std::invalid_argument("DoubleTable: column limit count mismatch");
}

DoubleTable DoubleTable::transposed() const {
    DoubleTable t;
    t.row_labels = col_labels;
    t.col_labels = row_labels;
    t.row_limits = col_limits;
    t.col_limits = row_limits;
    t.metric = metric;
    t.cells.assign(cols(), std::vector<double>(rows()));
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) t.cells[j][i] = cells[i][j];
    return t;
}

std::string DoubleTable::to_csv() const {
    validate();
    std::ostringstream os;
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (std::size_t j = 0; j < cols(); ++j) {
        if (j) os << ',';
        double lab = col_labels.empty() ? static_cast<double>(j) : col_labels[j];
        os << 'p' << num(lab);
    }
    os << '\n';
    for (std::size_t i = 0; i < rows(); ++i) {
        double lab = row_labels.empty() ? static_cast<double>(i) : row_labels[i];
        os << "k=" << num(lab);
        for (std::size_t j = 0; j < cols(); ++j) os << ',' << num(cells[i][j]);
        os << '\n';
    }
    return os.str();
}

DoubleTable DoubleTable::from_csv(const std::string& text) {
    DoubleTable t;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("DoubleTable::from_csv: empty input");
    {
        std::istringstream hs(line);
        std::string tok;
        while (std::getline(hs, tok, ',')) {
            if (tok.empty()) continue;
            if (tok[0] == 'p') tok = tok.substr(1);
            t.col_labels.push_back(std::stod(tok));
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::string tok;
        if (!std::getline(rs, tok, ','))
            throw std::invalid_argument("DoubleTable::from_csv: bad row");
        if (tok.rfind("k=", 0) == 0) tok = tok.substr(2);
        t.row_labels.push_back(std::stod(tok));
        std::vector<double> row;
        while (std::getline(rs, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() != t.col_labels.size())
            throw std::invalid_argument("DoubleTable::from_csv: row width mismatch");
        t.cells.push_back(std::move(row));
    }
    t.validate();
    return t;
}

namespace {

double trailing_mean(const std::vector<double>& v, std::size_t n) {
    n = std::min(n, v.size());
    double s = 0;
    for (std::size_t i = v.size() - n; i < v.size(); ++i) s += v[i];
    return s / static_cast<double>(n);
}

struct Prepared {
    std::vector<double> rowlim;  // limit in p for each k
    std::vector<double> collim;  // limit in k for each p
    bool rowlim_est = false, collim_est = false;
    std::size_t R, C;
};

Prepared prepare(const DoubleTable& t) {
    t.validate();
    if (t.rows() < 3 || t.cols() < 3)
        throw std::invalid_argument("moore_osgood: table too small (< 3x3)");
    Prepared p;
    p.R = t.rows();
    p.C = t.cols();
    if (t.row_limits) {
        p.rowlim = *t.row_limits;
    } else {
        p.rowlim_est = true;
        for (std::size_t i = 0; i < p.R; ++i) p.rowlim.push_back(t.cells[i].back());
    }
    if (t.col_limits) {
        p.collim = *t.col_limits;
    } else {
        p.collim_est = true;
        for (std::size_t j = 0; j < p.C; ++j) p.collim.push_back(t.cells.back()[j]);
    }
    return p;
}

void fill_common(MooreOsgoodVerdict& v, const DoubleTable& t, const Prepared& p) {
    v.grid_rows = p.R;
    v.grid_cols = p.C;
    v.row_limits_estimated = p.rowlim_est;
    v.col_limits_estimated = p.collim_est;
    std::size_t d = std::min(p.R, p.C);
    std::vector<double> diag;
    for (std::size_t i = 0; i < d; ++i) diag.push_back(t.cells[p.R - d + i][p.C - d + i]);
    v.joint_estimate = trailing_mean(diag, 3);
    v.iterated_row_then_col = trailing_mean(p.rowlim, 3);
    v.iterated_col_then_row = trailing_mean(p.collim, 3);
    v.discrepancy = std::fabs(v.iterated_row_then_col - v.iterated_col_then_row);
}

// sup_k |gamma_{k,p} - rowlim_k| at column j
double sup_dev_column(const DoubleTable& t, const Prepared& p, std::size_t j) {
    double s = 0;
    for (std::size_t i = 0; i < p.R; ++i) s = std::max(s, std::fabs(t.cells[i][j] - p.rowlim[i]));
    return s;
}

// condition (i): the uniform-in-k deviation must fall below tol(p) along p.
// When the row limits are only estimated from the last column, that column is
// excluded (its deviation is trivially zero).
bool condition_i(const DoubleTable& t, const Prepared& p, const std::vector<double>& tol,
                 std::string& detail) {
    std::size_t last = p.rowlim_est ? p.C - 2 : p.C - 1;
    std::size_t second = last > 0 ? last - 1 : last;
    double a = sup_dev_column(t, p, last), b = sup_dev_column(t, p, second);
    double budget = tol[std::min(last, tol.size() - 1)];
    bool ok = std::min(a, b) <= budget;
    if (!ok) {
        std::ostringstream os;
        os << "cond (i): sup_k deviation " << std::min(a, b) << " > tol " << budget
           << " at trailing p columns; ";
        detail += os.str();
    }
    return ok;
}

}  // namespace

MooreOsgoodVerdict moore_osgood_a(const DoubleTable& t, double tol) {
    return moore_osgood_a(t, std::vector<double>{tol});
}

MooreOsgoodVerdict moore_osgood_a(const DoubleTable& t, const std::vector<double>& tol_schedule) {
    if (tol_schedule.empty()) throw std::invalid_argument("moore_osgood_a: empty tol schedule");
    Prepared p = prepare(t);
    MooreOsgoodVerdict v;
    v.variant = "A";
    fill_common(v, t, p);
    double tol = tol_schedule.back();

    v.cond_i = condition_i(t, p, tol_schedule, v.detail);

    // condition (ii): every column converges along k to its (declared or
    // estimated) column limit; deviation measured on the trailing half.
    v.cond_ii = true;
    std::size_t k0 = p.R / 2;
    for (std::size_t j = 0; j < p.C; ++j) {
        double dev = 0;
        std::size_t klast = p.collim_est ? p.R - 1 : p.R;  // estimated limit = last row
        for (std::size_t i = k0; i < klast; ++i)
            dev = std::max(dev, std::fabs(t.cells[i][j] - p.collim[j]));
        if (dev > tol) {
            v.cond_ii = false;
            std::ostringstream os;
            os << "cond (ii): column " << j << " deviation " << dev << " > tol " << tol << "; ";
            v.detail += os.str();
        }
    }
    v.pass = v.cond_i && v.cond_ii;
    return v;
}

MooreOsgoodVerdict moore_osgood_b(const DoubleTable& t, double tol) {
    Prepared p = prepare(t);
    MooreOsgoodVerdict v;
    v.variant = "B";
    fill_common(v, t, p);

    std::vector<double> tols{tol};
    v.cond_i = condition_i(t, p, tols, v.detail);

    // condition (ii): limsup - liminf along k, estimated from the trailing
    // half of each column, must vanish along p; checked at the last column.
    std::size_t k0 = p.R / 2;
    auto column_gap = [&](std::size_t j) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = k0; i < p.R; ++i) {
            lo = std::min(lo, t.cells[i][j]);
            hi = std::max(hi, t.cells[i][j]);
        }
        return hi - lo;
    };
    double gap = std::min(column_gap(p.C - 1), column_gap(p.C - 2));
    v.cond_ii = gap <= tol;
    if (!v.cond_ii) {
        std::ostringstream os;
        os << "cond (ii): limsup-liminf gap " << gap << " > tol " << tol << " at trailing columns; ";
        v.detail += os.str();
    }

    // for B the natural joint estimate is lim_p of the trailing-half column means
    std::vector<double> colmeans;
    for (std::size_t j = 0; j < p.C; ++j) {
        double s = 0;
        for (std::size_t i = k0; i < p.R; ++i) s += t.cells[i][j];
        colmeans.push_back(s / static_cast<double>(p.R - k0));
    }
    v.iterated_col_then_row = trailing_mean(colmeans, 2);
    v.joint_estimate = v.iterated_col_then_row;
    v.discrepancy = std::fabs(v.iterated_row_then_col - v.iterated_col_then_row);
    v.pass = v.cond_i && v.cond_ii;
    return v;
}

}  // namespace bsdelab
