#include "arrange/exact_linalg.hpp"

#include <algorithm>
#include <utility>

#include "arrange/error.hpp"

namespace arrange {

Rational parse_rational(const std::string& text)
{
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '\t')
            s.push_back(ch);
    if (s.empty())
        throw Error(Errc::ParseError, "empty rational");
    if (s.front() == '+')
        s.erase(s.begin());
    auto valid_int = [](const std::string& part) {
        std::size_t start = (!part.empty() && part.front() == '-') ? 1 : 0;
        if (start == part.size())
            return false;
        return std::all_of(part.begin() + start, part.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-')
        throw Error(Errc::ParseError, "malformed rational '" + text + "'");
    mpz_class d(den);
    if (d == 0)
        throw Error(Errc::ParseError, "zero denominator in '" + text + "'");
    Rational r(mpz_class(num), d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value)
{
    return value.get_str();
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows)
{
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, 1);
    return m;
}

RationalMatrix RationalMatrix::from_dense(const std::vector<std::vector<Rational>>& dense)
{
    std::size_t cols = dense.empty() ? 0 : dense.front().size();
    RationalMatrix m(dense.size(), cols);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i].size() != cols)
            throw Error(Errc::ShapeMismatch, "ragged dense matrix");
        for (std::size_t j = 0; j < cols; ++j)
            m.set(i, j, dense[i][j]);
    }
    return m;
}

std::size_t RationalMatrix::nonzeros() const noexcept
{
    std::size_t n = 0;
    for (const auto& r : data_)
        n += r.size();
    return n;
}

void RationalMatrix::check_index(std::size_t row, std::size_t col) const
{
    if (row >= rows_ || col >= cols_)
        throw Error(Errc::ShapeMismatch, "matrix index (" + std::to_string(row) + "," + std::to_string(col)
                                             + ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

Rational RationalMatrix::at(std::size_t row, std::size_t col) const
{
    check_index(row, col);
    auto it = data_[row].find(col);
    return it == data_[row].end() ? Rational(0) : it->second;
}

void RationalMatrix::set(std::size_t row, std::size_t col, const Rational& value)
{
    check_index(row, col);
    if (value == 0)
        data_[row].erase(col);
    else
        data_[row][col] = value;
}

void RationalMatrix::add(std::size_t row, std::size_t col, const Rational& value)
{
    check_index(row, col);
    if (value == 0)
        return;
    auto [it, inserted] = data_[row].try_emplace(col, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0)
            data_[row].erase(it);
    }
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i])
            t.data_[j][i] = v;
    return t;
}

std::vector<std::vector<Rational>> RationalMatrix::dense() const
{
    std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_, Rational(0)));
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i])
            d[i][j] = v;
    return d;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw Error(Errc::ShapeMismatch, "product of " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_)
                                             + " and " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (const auto& [k, av] : a.data_[i])
            for (const auto& [j, bv] : b.data_[k])
                c.add(i, j, av * bv);
    return c;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

namespace {

std::size_t dense_rank(std::vector<std::vector<Rational>> m, std::size_t cols)
{
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < m.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < m.size() && m[pivot][col] == 0)
            ++pivot;
        if (pivot == m.size())
            continue;
        std::swap(m[pivot], m[r]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][col] == 0)
                continue;
            Rational factor = m[i][col] / m[r][col];
            for (std::size_t j = col; j < cols; ++j)
                m[i][j] -= factor * m[r][j];
        }
        ++r;
    }
    return r;
}

// Online echelon form: every incoming row is reduced against the pivot rows
// found so far, keyed by their leading column.
std::size_t sparse_rank(const RationalMatrix& m)
{
    std::map<std::size_t, std::map<std::size_t, Rational>> pivots;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::map<std::size_t, Rational> row = m.row(i);
        while (!row.empty()) {
            auto lead = row.begin();
            auto p = pivots.find(lead->first);
            if (p == pivots.end()) {
                pivots.emplace(lead->first, std::move(row));
                break;
            }
            Rational factor = lead->second / p->second.begin()->second;
            for (const auto& [j, v] : p->second) {
                auto [it, inserted] = row.try_emplace(j, -factor * v);
                if (!inserted) {
                    it->second -= factor * v;
                    if (it->second == 0)
                        row.erase(it);
                }
            }
        }
    }
    return pivots.size();
}

} // namespace

std::size_t rank(const RationalMatrix& m)
{
    if (m.is_zero())
        return 0;
    if (m.rows() < kDenseThreshold && m.cols() < kDenseThreshold)
        return dense_rank(m.dense(), m.cols());
    return sparse_rank(m);
}

std::size_t kernel_dim(const RationalMatrix& m)
{
    return m.cols() - rank(m);
}

std::size_t homology_dim(const RationalMatrix& d_in, const RationalMatrix& d_out)
{
    if (d_in.rows() != d_out.cols())
        throw Error(Errc::ShapeMismatch, "d_in lands in dimension " + std::to_string(d_in.rows())
                                             + " but d_out starts from " + std::to_string(d_out.cols()));
    if (!(d_out * d_in).is_zero())
        throw Error(Errc::CompositionNonzero, "d_out * d_in != 0");
    return kernel_dim(d_out) - rank(d_in);
}

EchelonForm reduced_echelon(std::vector<std::vector<Rational>> rows, std::size_t cols)
{
    EchelonForm out;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][col] == 0)
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[pivot], rows[r]);
        Rational lead = rows[r][col];
        for (std::size_t j = col; j < cols; ++j)
            rows[r][j] /= lead;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0)
                continue;
            Rational factor = rows[i][col];
            for (std::size_t j = col; j < cols; ++j)
                rows[i][j] -= factor * rows[r][j];
        }
        out.pivots.push_back(col);
        ++r;
    }
    rows.resize(r);
    out.rows = std::move(rows);
    return out;
}

std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m)
{
    EchelonForm e = reduced_echelon(m.dense(), m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : e.pivots)
        is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[free] = 1;
        for (std::size_t i = 0; i < e.rows.size(); ++i)
            v[e.pivots[i]] = -e.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw Error(Errc::ShapeMismatch, "solve_unique expects a square system");
    auto aug = a.dense();
    for (std::size_t i = 0; i < n; ++i)
        aug[i].push_back(b[i]);
    EchelonForm e = reduced_echelon(std::move(aug), n + 1);
    if (e.rows.size() != n || (n > 0 && e.pivots.back() >= n))
        return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = e.rows[i][n];
    return x;
}

} // namespace arrange
