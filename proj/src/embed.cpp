#include <algorithm>

#include "fqdyn/field.hpp"
#include "fqdyn/poly.hpp"

namespace fqdyn {

// The image of the source modulus root is the least root (canonical order) of
// the source modulus inside the target; its powers are cached on the target
// context so applying the embedding is a prime-field linear combination.
FElem embed(const FElem& x, const FieldPtr& target) {
    const FieldPtr& src = x.ctx();
    if (src->same_field(*target)) return FElem(target, x.coeffs());
    if (src->p() != target->p())
        raise(Errc::NoEmbedding, "different characteristic");
    if (target->m() % src->m() != 0)
        raise(Errc::NoEmbedding, "source degree does not divide target degree");

    const int sm = src->m();
    const int tm = target->m();
    if (sm == 1) {
        std::vector<int64_t> c(size_t(tm), 0);
        c[0] = x.coeffs()[0];
        return FElem(target, std::move(c));
    }

    std::pair<int, std::vector<int64_t>> key{sm, src->modulus()};
    std::vector<int64_t> powers;
    {
        std::lock_guard<std::mutex> lock(target->embed_mu_);
        auto it = target->embed_cache_.find(key);
        if (it != target->embed_cache_.end()) powers = it->second;
    }
    if (powers.empty()) {
        // lift the source modulus (prime-field coefficients) and locate its
        // least root in the target
        Poly lifted = Poly::from_int_coeffs(target, src->modulus());
        auto roots = roots_in_field(lifted, target->seed());
        if (roots.empty()) raise(Errc::Inconsistency, "source modulus has no root in target");
        const FElem& w = roots.front();
        powers.assign(size_t(sm) * size_t(tm), 0);
        FElem acc = target->one();
        for (int i = 0; i < sm; ++i) {
            std::copy(acc.coeffs().begin(), acc.coeffs().end(), powers.begin() + size_t(i) * size_t(tm));
            if (i + 1 < sm) acc = acc * w;
        }
        std::lock_guard<std::mutex> lock(target->embed_mu_);
        target->embed_cache_.emplace(std::move(key), powers);
    }

    std::vector<int64_t> out(size_t(tm), 0);
    std::vector<int64_t> tmp(size_t(tm), 0);
    for (int i = 0; i < sm; ++i) {
        int64_t a = x.coeffs()[size_t(i)];
        if (a == 0) continue;
        target->el_scalar_mul(powers.data() + size_t(i) * size_t(tm), a, tmp.data());
        target->el_add(out.data(), tmp.data(), out.data());
    }
    return FElem(target, std::move(out));
}

std::optional<FElem> project(const FElem& x, const FieldPtr& small) {
    const FieldPtr& big = x.ctx();
    if (big->same_field(*small)) return x;
    if (small->p() != big->p() || big->m() % small->m() != 0) return std::nullopt;
    const int sm = small->m();
    const int bm = big->m();
    const int64_t p = big->p();
    // Columns are the embeddings of the basis of `small`; solve the F_p-linear
    // system cols * y = x by Gaussian elimination.
    std::vector<std::vector<int64_t>> aug(size_t(bm), std::vector<int64_t>(size_t(sm) + 1, 0));
    for (int j = 0; j < sm; ++j) {
        std::vector<int64_t> basis(size_t(sm), 0);
        basis[size_t(j)] = 1;
        FElem col = embed(FElem(small, basis), big);
        for (int i = 0; i < bm; ++i) aug[size_t(i)][size_t(j)] = col.coeffs()[size_t(i)];
    }
    for (int i = 0; i < bm; ++i) aug[size_t(i)][size_t(sm)] = x.coeffs()[size_t(i)];

    const Barrett& br = big->barrett();
    int row = 0;
    std::vector<int> pivot_of_col(size_t(sm), -1);
    for (int col = 0; col < sm && row < bm; ++col) {
        int pr = -1;
        for (int i = row; i < bm; ++i)
            if (aug[size_t(i)][size_t(col)] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(aug[size_t(row)], aug[size_t(pr)]);
        int64_t inv = 1;
        {
            // modular inverse of the pivot
            int64_t t = 0, nt = 1, r = p, nr = aug[size_t(row)][size_t(col)];
            while (nr != 0) {
                int64_t q = r / nr;
                int64_t tmp = t - q * nt;
                t = nt;
                nt = tmp;
                tmp = r - q * nr;
                r = nr;
                nr = tmp;
            }
            inv = ((t % p) + p) % p;
        }
        for (int j = col; j <= sm; ++j)
            aug[size_t(row)][size_t(j)] = int64_t(br.mul(uint64_t(aug[size_t(row)][size_t(j)]), uint64_t(inv)));
        for (int i = 0; i < bm; ++i) {
            if (i == row) continue;
            int64_t f = aug[size_t(i)][size_t(col)];
            if (f == 0) continue;
            for (int j = col; j <= sm; ++j) {
                int64_t t = aug[size_t(i)][size_t(j)] - int64_t(br.mul(uint64_t(f), uint64_t(aug[size_t(row)][size_t(j)])));
                aug[size_t(i)][size_t(j)] = ((t % p) + p) % p;
            }
        }
        pivot_of_col[size_t(col)] = row;
        ++row;
    }
    // consistency: rows beyond the pivots must have zero rhs
    for (int i = row; i < bm; ++i)
        if (aug[size_t(i)][size_t(sm)] != 0) return std::nullopt;
    std::vector<int64_t> y(size_t(sm), 0);
    for (int col = 0; col < sm; ++col)
        if (pivot_of_col[size_t(col)] >= 0) y[size_t(col)] = aug[size_t(pivot_of_col[size_t(col)])][size_t(sm)];
    FElem cand(small, std::move(y));
    if (embed(cand, big) != x) return std::nullopt;
    return cand;
}

} // namespace fqdyn
