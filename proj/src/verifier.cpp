#include "hyprandtl/verifier.hpp"

#include <gmpxx.h>
#include <omp.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "json.hpp"

namespace hyprandtl {

std::string to_string(InequalityId id) {
    switch (id) {
        case InequalityId::FE1: return "FE1";
        case InequalityId::FE2: return "FE2";
        case InequalityId::FE3: return "FE3";
        case InequalityId::FE4: return "FE4";
        case InequalityId::FE5: return "FE5";
        case InequalityId::FE6: return "FE6";
        case InequalityId::FE10: return "FE10";
        case InequalityId::LAETIMATE: return "LAETIMATE";
        case InequalityId::YOUNG_DIS: return "YOUNG_DIS";
        case InequalityId::FACT_SUBADD: return "FACT_SUBADD";
    }
    return "?";
}

InequalityId parse_inequality(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto id : {InequalityId::FE1, InequalityId::FE2, InequalityId::FE3, InequalityId::FE4, InequalityId::FE5, InequalityId::FE6,
                    InequalityId::FE10, InequalityId::LAETIMATE, InequalityId::YOUNG_DIS, InequalityId::FACT_SUBADD})
        if (u == to_string(id)) return id;
    throw DomainError("unknown inequality id '" + s + "'");
}

std::string ExactRho::str() const { return std::to_string(num) + "/" + std::to_string(den); }

ExactRho ExactRho::parse(const std::string& s) {
    ExactRho r;
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            r.num = std::stoll(s.substr(0, slash));
            r.den = std::stoll(s.substr(slash + 1));
        } else {
            const auto dot = s.find('.');
            if (dot == std::string::npos) {
                r.num = std::stoll(s);
                r.den = 1;
            } else {
                const std::string frac = s.substr(dot + 1);
                if (frac.size() > 12) throw DomainError("too many decimals in rho '" + s + "'");
                std::int64_t den = 1;
                for (std::size_t n = 0; n < frac.size(); ++n) den *= 10;
                r.num = std::stoll(s.substr(0, dot).empty() ? "0" : s.substr(0, dot)) * den + (frac.empty() ? 0 : std::stoll(frac));
                r.den = den;
            }
        }
    } catch (const std::logic_error&) {
        throw DomainError("cannot parse rho '" + s + "'");
    }
    if (r.num <= 0 || r.den <= 0) throw DomainError("rho must be a positive rational, got '" + s + "'");
    const std::int64_t g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

namespace {

using ExpVec = std::vector<int>;
constexpr double kLogGuard = 1e-6;

// Prime exponent bookkeeping for products of factorials, small integers and powers of rho.
class PrimeTables {
public:
    PrimeTables(int max_n, const ExactRho& rho) : max_n_(max_n) {
        std::vector<int> spf(static_cast<std::size_t>(max_n + 1), 0);
        for (int p = 2; p <= max_n; ++p) {
            if (spf[static_cast<std::size_t>(p)] != 0) continue;
            primes_.push_back(p);
            for (int q = p; q <= max_n; q += p)
                if (spf[static_cast<std::size_t>(q)] == 0) spf[static_cast<std::size_t>(q)] = p;
        }
        small_count_ = primes_.size();
        rho_exp_.assign(primes_.size(), 0);
        factor_rho(rho.num, +1);
        factor_rho(rho.den, -1);
        rho_exp_.resize(primes_.size(), 0);

        const std::size_t P = primes_.size();
        index_of_.assign(static_cast<std::size_t>(max_n + 1), -1);
        for (std::size_t i = 0; i < small_count_; ++i) index_of_[static_cast<std::size_t>(primes_[i])] = static_cast<int>(i);
        int_exp_.resize(static_cast<std::size_t>(max_n + 1));
        for (int n = 2; n <= max_n; ++n) {
            int x = n;
            while (x > 1) {
                const int p = spf[static_cast<std::size_t>(x)];
                int e = 0;
                while (x % p == 0) {
                    x /= p;
                    ++e;
                }
                int_exp_[static_cast<std::size_t>(n)].push_back({index_of_[static_cast<std::size_t>(p)], e});
            }
        }
        fact_exp_.assign(static_cast<std::size_t>(max_n + 1), ExpVec(P, 0));
        for (int n = 2; n <= max_n; ++n) {
            fact_exp_[static_cast<std::size_t>(n)] = fact_exp_[static_cast<std::size_t>(n - 1)];
            for (auto [i, e] : int_exp_[static_cast<std::size_t>(n)]) fact_exp_[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] += e;
        }
        logp_.resize(P);
        for (std::size_t i = 0; i < P; ++i) logp_[i] = std::log(static_cast<double>(primes_[i]));
    }

    std::size_t size() const { return primes_.size(); }
    const std::vector<std::int64_t>& primes() const { return primes_; }

    void add_fact(ExpVec& e, int n, int c) const {
        check(n);
        const auto& f = fact_exp_[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < small_count_; ++i) e[i] += c * f[i];
    }
    void add_int(ExpVec& e, int n, int c) const {
        if (n <= 0) throw std::logic_error("nonpositive integer factor");
        check(n);
        for (auto [i, x] : int_exp_[static_cast<std::size_t>(n)]) e[static_cast<std::size_t>(i)] += c * x;
    }
    void add_rho(ExpVec& e, int power) const {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += power * rho_exp_[i];
    }
    double log_value(const ExpVec& e) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) acc += e[i] * logp_[i];
        return acc;
    }

    void to_fraction(const ExpVec& e, mpz_class& num, mpz_class& den) const {
        num = 1;
        den = 1;
        mpz_class t;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(primes_[i]), static_cast<unsigned long>(std::abs(e[i])));
            if (e[i] > 0)
                num *= t;
            else
                den *= t;
        }
    }

    // sign of value(a) - value(b)
    int compare(const ExpVec& a, double la, const ExpVec& b, double lb) const {
        if (la > lb + kLogGuard) return 1;
        if (la < lb - kLogGuard) return -1;
        ExpVec d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
        mpz_class num, den;
        to_fraction(d, num, den);
        return cmp(num, den) > 0 ? 1 : (cmp(num, den) < 0 ? -1 : 0);
    }

private:
    void check(int n) const {
        if (n > max_n_) throw std::logic_error("prime table too small for " + std::to_string(n));
    }
    void factor_rho(std::int64_t x, int sign) {
        for (std::int64_t p = 2; p * p <= x; ++p) {
            int e = 0;
            while (x % p == 0) {
                x /= p;
                ++e;
            }
            if (e) add_prime(p, sign * e);
        }
        if (x > 1) add_prime(x, sign);
    }
    void add_prime(std::int64_t p, int e) {
        for (std::size_t i = 0; i < primes_.size(); ++i)
            if (primes_[i] == p) {
                if (rho_exp_.size() <= i) rho_exp_.resize(i + 1, 0);
                rho_exp_[i] += e;
                return;
            }
        primes_.push_back(p);
        rho_exp_.resize(primes_.size(), 0);
        rho_exp_.back() += e;
    }

    int max_n_;
    std::vector<std::int64_t> primes_;
    std::size_t small_count_ = 0;
    std::vector<int> index_of_;
    std::vector<int> rho_exp_;
    std::vector<std::vector<std::pair<int, int>>> int_exp_;
    std::vector<ExpVec> fact_exp_;
    std::vector<double> logp_;
};

// Builds one squared ratio; weights enter squared.
struct Term {
    const PrimeTables& T;
    ExpVec e;
    int rho_pow = 0;

    explicit Term(const PrimeTables& t) : T(t), e(t.size(), 0) {}
    void reset() {
        std::fill(e.begin(), e.end(), 0);
        rho_pow = 0;
    }
    void fact(int n, int c) { T.add_fact(e, n, c); }
    void integer(int n, int c) { T.add_int(e, n, c); }
    // H^2_{a,b} = rho^{2(a+b+1)} (a+b+1)^18 / ((a+b)!^2 a!)
    void H2(int a, int b, int c) {
        rho_pow += 2 * c * (a + b + 1);
        integer(a + b + 1, 18 * c);
        fact(a + b, -2 * c);
        fact(a, -c);
    }
    void N2(int m, int c) { H2(m, 0, c); }
    void L2(int k, int c) { H2(1, k, c); }
    void binom2(int n, int k, int c) {
        fact(n, 2 * c);
        fact(k, -2 * c);
        fact(n - k, -2 * c);
    }
    void finish() { T.add_rho(e, rho_pow); }
};

void build_fe1(Term& t, int m, int j) {
    t.binom2(m, j, 1);
    t.N2(m + 1, 1);
    t.N2(j + 3, -1);
    t.N2(m - j + 1, -1);
    t.integer(j + 1, 2);
}
void build_fe2(Term& t, int m, int j) {
    t.binom2(m, j, 1);
    t.N2(m + 1, 1);
    t.N2(j + 1, -1);
    t.N2(m - j + 3, -1);
    t.integer(m - j + 1, 2);
}
void build_fe3(Term& t, int k, int i) {
    t.binom2(k + 1, i, 1);
    t.integer(k + 1, -1);
    t.L2(k, 1);
    t.H2(4, i - 1, -1);
    t.L2(k + 1 - i, -1);
    t.integer(i + 1, 2);
    t.integer(k + 2 - i, -1);
}
void build_fe4(Term& t, int k, int i) {
    t.binom2(k + 1, i, 1);
    t.integer(k + 1, -1);
    t.L2(k, 1);
    t.H2(2, i - 2, -1);
    t.H2(3, k + 2 - i, -1);
    t.integer(k + 3 - i, 2);
}
void build_fe5(Term& t, int m, int j) {
    t.binom2(m, j, 1);
    t.integer(m + 1, 1);
    t.N2(m + 1, 1);
    t.N2(j + 1, -1);
    t.H2(m - j + 3, 1, -1);
    t.integer(m - j + 1, 2);
    t.integer(j + 1, -1);
}
void build_fe6(Term& t, int m, int j) {
    t.binom2(m, j, 1);
    t.integer(m + 1, 1);
    t.N2(m + 1, 1);
    t.N2(j + 3, -1);
    t.H2(m - j + 1, 1, -1);
    t.integer(j + 1, 2);
    t.integer(m - j + 1, -3);
}
void build_fe10(Term& t, int m, int k, int i, int j) {
    t.binom2(m, j, 1);
    t.binom2(k + 1, i, 1);
    t.integer(m + k + 1, -1);
    t.integer(m + 1, 2);
    t.H2(m + 1, k, 1);
    t.H2(j + 4, i - 1, -1);
    t.H2(m - j + 1, k + 1 - i, -1);
    t.integer(i + j + 1, 4);
    t.integer(j + 4, -2);
    t.integer(m - j + 1, -2);
    t.integer(m + k - i - j + 2, -1);
}
void build_laet(Term& t, int m, int k, int i, int j) {
    t.binom2(m, j, 1);
    t.binom2(k + 1, i, 1);
    t.integer(m + k + 1, -1);
    t.integer(m + 1, 2);
    t.H2(m + 1, k, 1);
    t.H2(j + 2, i - 2, -1);
    t.H2(m - j + 3, k + 2 - i, -1);
    t.integer(m + k - i - j + 2, 4);
    t.integer(j + 1, -2);
}

struct OuterBest {
    bool any = false;
    ExpVec e;
    double log = 0.0;
    std::vector<int> idx;
    std::uint64_t count = 0;
    int rho_pow = 0;
};

// Visit calls f(idx, Term&) with the term built and finished.
template <class Enumerate>
InequalityCertificate sweep(InequalityId id, int max_outer, const ExactRho& rho, const char* outer_name,
                            std::vector<std::string> names, int table_n, Enumerate&& enumerate) {
    const auto t0 = std::chrono::steady_clock::now();
    const PrimeTables T(table_n, rho);
    std::vector<OuterBest> best(static_cast<std::size_t>(max_outer + 1));

#pragma omp parallel
    {
        Term term(T);
#pragma omp for schedule(dynamic, 1)
        for (int o = 0; o <= max_outer; ++o) {
            OuterBest& b = best[static_cast<std::size_t>(o)];
            enumerate(o, term, [&](const std::vector<int>& idx) {
                term.finish();
                const double l = T.log_value(term.e);
                ++b.count;
                if (!b.any || T.compare(term.e, l, b.e, b.log) > 0) {
                    b.any = true;
                    b.e = term.e;
                    b.log = l;
                    b.idx = idx;
                    b.rho_pow = term.rho_pow;
                }
            });
        }
    }

    InequalityCertificate c;
    c.id = id;
    c.max_outer = max_outer;
    c.outer_index = outer_name;
    c.rho = rho;
    c.argmax_names = std::move(names);
    const OuterBest* top = nullptr;
    for (const auto& b : best) {
        c.evaluated += b.count;
        c.outer_log10.push_back(b.any ? b.log / std::log(10.0) : -std::numeric_limits<double>::infinity());
        if (b.any && (!top || T.compare(b.e, b.log, top->e, top->log) > 0)) top = &b;
    }
    if (top) {
        mpz_class num, den;
        T.to_fraction(top->e, num, den);
        c.sup_num = num.get_str();
        c.sup_den = den.get_str();
        c.sup_approx = std::exp(top->log);
        c.argmax = top->idx;
        c.rho_power = top->rho_pow;
    }

    // Per parity class: maxima non-increasing from the class argmax onwards.
    for (int parity = 0; parity < 2; ++parity) {
        const OuterBest* peak = nullptr;
        int peak_o = -1;
        for (int o = parity; o <= max_outer; o += 2) {
            const auto& b = best[static_cast<std::size_t>(o)];
            if (b.any && (!peak || T.compare(b.e, b.log, peak->e, peak->log) > 0)) {
                peak = &b;
                peak_o = o;
            }
        }
        if (!peak) continue;
        const OuterBest* prev = peak;
        for (int o = peak_o + 2; o <= max_outer; o += 2) {
            const auto& b = best[static_cast<std::size_t>(o)];
            if (!b.any) continue;
            if (T.compare(b.e, b.log, prev->e, prev->log) > 0) c.monotone_tail = false;
            prev = &b;
        }
    }
    c.passed = c.monotone_tail && std::isfinite(c.sup_approx);
    c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

void check_bound(int b, int cap, const char* what) {
    if (b < 0 || b > cap) throw DomainError(std::string(what) + " must lie in [0, " + std::to_string(cap) + "]");
}

}  // namespace

InequalityCertificate verify_fe1(int max_m, const ExactRho& rho) {
    check_bound(max_m, 400, "max_m");
    return sweep(InequalityId::FE1, max_m, rho, "m", {"m", "j"}, 2 * max_m + 16, [](int m, Term& t, auto&& visit) {
        for (int j = 0; j <= m / 2; ++j) {
            t.reset();
            build_fe1(t, m, j);
            visit({m, j});
        }
    });
}

InequalityCertificate verify_fe2(int max_m, const ExactRho& rho) {
    check_bound(max_m, 400, "max_m");
    return sweep(InequalityId::FE2, max_m, rho, "m", {"m", "j"}, 2 * max_m + 16, [](int m, Term& t, auto&& visit) {
        for (int j = m / 2 + 1; j <= m; ++j) {
            t.reset();
            build_fe2(t, m, j);
            visit({m, j});
        }
    });
}

InequalityCertificate verify_fe3(int max_k, const ExactRho& rho) {
    check_bound(max_k, 400, "max_k");
    return sweep(InequalityId::FE3, max_k, rho, "k", {"k", "i"}, 2 * max_k + 16, [](int k, Term& t, auto&& visit) {
        for (int i = 1; i <= (k + 1) / 2; ++i) {
            t.reset();
            build_fe3(t, k, i);
            visit({k, i});
        }
    });
}

InequalityCertificate verify_fe4(int max_k, const ExactRho& rho) {
    check_bound(max_k, 400, "max_k");
    return sweep(InequalityId::FE4, max_k, rho, "k", {"k", "i"}, 2 * max_k + 16, [](int k, Term& t, auto&& visit) {
        // H_{rho,2,i-2} needs i >= 2
        for (int i = std::max(2, (k + 1) / 2 + 1); i <= k + 1; ++i) {
            t.reset();
            build_fe4(t, k, i);
            visit({k, i});
        }
    });
}

InequalityCertificate verify_fe5(int max_m, const ExactRho& rho) {
    check_bound(max_m, 400, "max_m");
    return sweep(InequalityId::FE5, max_m, rho, "m", {"m", "j"}, 2 * max_m + 16, [](int m, Term& t, auto&& visit) {
        for (int j = m / 2 + 1; j <= m; ++j) {
            t.reset();
            build_fe5(t, m, j);
            visit({m, j});
        }
    });
}

InequalityCertificate verify_fe6(int max_m, const ExactRho& rho) {
    check_bound(max_m, 400, "max_m");
    return sweep(InequalityId::FE6, max_m, rho, "m", {"m", "j"}, 2 * max_m + 16, [](int m, Term& t, auto&& visit) {
        for (int j = 1; j <= m / 2; ++j) {
            t.reset();
            build_fe6(t, m, j);
            visit({m, j});
        }
    });
}

InequalityCertificate verify_fe10(int max_sum, const ExactRho& rho) {
    check_bound(max_sum, 200, "max m+k");
    return sweep(InequalityId::FE10, max_sum, rho, "m+k", {"m", "k", "i", "j"}, 2 * max_sum + 16, [](int n, Term& t, auto&& visit) {
        const int cap = (n + 1) / 2;
        for (int m = 0; m <= n; ++m) {
            const int k = n - m;
            for (int j = 0; j <= m; ++j)
                for (int i = 1; i <= k + 1 && i + j <= cap; ++i) {
                    t.reset();
                    build_fe10(t, m, k, i, j);
                    visit({m, k, i, j});
                }
        }
    });
}

InequalityCertificate verify_laetimate(int max_sum, const ExactRho& rho) {
    check_bound(max_sum, 200, "max m+k");
    return sweep(InequalityId::LAETIMATE, max_sum, rho, "m+k", {"m", "k", "i", "j"}, 2 * max_sum + 16,
                 [](int n, Term& t, auto&& visit) {
                     const int lo = (n + 1) / 2;
                     for (int m = 0; m <= n; ++m) {
                         const int k = n - m;
                         for (int j = 0; j <= m; ++j)
                             for (int i = std::max(2, lo - j); i <= k + 1; ++i) {
                                 t.reset();
                                 build_laet(t, m, k, i, j);
                                 visit({m, k, i, j});
                             }
                     }
                 });
}

InequalityCertificate verify_weight_inequality(InequalityId id, int bound, const ExactRho& rho) {
    switch (id) {
        case InequalityId::FE1: return verify_fe1(bound, rho);
        case InequalityId::FE2: return verify_fe2(bound, rho);
        case InequalityId::FE3: return verify_fe3(bound, rho);
        case InequalityId::FE4: return verify_fe4(bound, rho);
        case InequalityId::FE5: return verify_fe5(bound, rho);
        case InequalityId::FE6: return verify_fe6(bound, rho);
        case InequalityId::FE10: return verify_fe10(bound, rho);
        case InequalityId::LAETIMATE: return verify_laetimate(bound, rho);
        default: break;
    }
    throw DomainError(to_string(id) + " is not a weight inequality");
}

std::string exact_ratio_sq(InequalityId id, const std::vector<int>& idx, const ExactRho& rho) {
    int top = 0;
    for (int v : idx) {
        if (v < 0) throw DomainError("negative index");
        top = std::max(top, v);
    }
    const PrimeTables T(4 * top + 32, rho);
    Term t(T);
    auto need = [&](std::size_t n) {
        if (idx.size() != n) throw DomainError(to_string(id) + " takes " + std::to_string(n) + " indices");
    };
    switch (id) {
        case InequalityId::FE1: need(2); build_fe1(t, idx[0], idx[1]); break;
        case InequalityId::FE2: need(2); build_fe2(t, idx[0], idx[1]); break;
        case InequalityId::FE3: need(2); build_fe3(t, idx[0], idx[1]); break;
        case InequalityId::FE4: need(2); build_fe4(t, idx[0], idx[1]); break;
        case InequalityId::FE5: need(2); build_fe5(t, idx[0], idx[1]); break;
        case InequalityId::FE6: need(2); build_fe6(t, idx[0], idx[1]); break;
        case InequalityId::FE10: need(4); build_fe10(t, idx[0], idx[1], idx[2], idx[3]); break;
        case InequalityId::LAETIMATE: need(4); build_laet(t, idx[0], idx[1], idx[2], idx[3]); break;
        default: throw DomainError(to_string(id) + " is not a weight inequality");
    }
    t.finish();
    mpz_class num, den;
    T.to_fraction(t.e, num, den);
    return num.get_str() + "/" + den.get_str();
}

bool young_holds(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& q, bool* equality) {
    mpz_class lhs = 0, q2 = 0, p1 = 0;
    const std::size_t n = p.size() + q.size() - 1;
    for (std::size_t m = 0; m < n; ++m) {
        mpz_class c = 0;
        for (std::size_t j = 0; j < p.size(); ++j)
            if (m >= j && m - j < q.size()) c += mpz_class(static_cast<long>(p[j])) * static_cast<long>(q[m - j]);
        lhs += c * c;
    }
    for (auto x : q) q2 += mpz_class(static_cast<long>(x)) * static_cast<long>(x);
    for (auto x : p) p1 += static_cast<long>(x);
    const mpz_class rhs = q2 * p1 * p1;
    if (equality) *equality = (lhs == rhs);
    return lhs <= rhs;
}

YoungResult verify_young_dis(int trials, int length, std::uint64_t seed) {
    if (trials < 0 || length < 1) throw DomainError("young: trials >= 0 and length >= 1 required");
    YoungResult r;
    r.trials = trials;
    r.length = length;
    r.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> numd(0, 1000), dend(1, 1000), zero(0, 4);
    for (int t = 0; t < trials; ++t) {
        std::vector<mpq_class> p(static_cast<std::size_t>(length)), q(static_cast<std::size_t>(length));
        for (auto* v : {&p, &q})
            for (auto& x : *v) {
                x = zero(rng) == 0 ? mpq_class(0) : mpq_class(numd(rng), dend(rng));
                x.canonicalize();
            }
        mpq_class lhs = 0, q2 = 0, p1 = 0;
        for (int m = 0; m < 2 * length - 1; ++m) {
            mpq_class c = 0;
            for (int j = std::max(0, m - length + 1); j <= std::min(m, length - 1); ++j)
                c += p[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(m - j)];
            lhs += c * c;
        }
        for (const auto& x : q) q2 += x * x;
        for (const auto& x : p) p1 += x;
        const mpq_class rhs = q2 * p1 * p1;
        if (lhs > rhs) r.passed = false;
        if (rhs > 0) {
            const mpq_class slack = (rhs - lhs) / rhs;
            r.min_slack = std::min(r.min_slack, slack.get_d());
            if (slack == 0) ++r.equality_cases;
        }
    }
    return r;
}

SubadditivityResult verify_factorial_subadditivity(int max_n) {
    if (max_n < 0 || max_n > 400) throw DomainError("max_n must lie in [0, 400]");
    SubadditivityResult r;
    r.max_n = max_n;
    std::vector<mpz_class> fact(static_cast<std::size_t>(max_n + 1));
    fact[0] = 1;
    for (int n = 1; n <= max_n; ++n) fact[static_cast<std::size_t>(n)] = fact[static_cast<std::size_t>(n - 1)] * n;
    for (int p = 0; p <= max_n; ++p)
        for (int q = 0; p + q <= max_n; ++q) {
            ++r.factorial_pairs;
            if (fact[static_cast<std::size_t>(p)] * fact[static_cast<std::size_t>(q)] > fact[static_cast<std::size_t>(p + q)]) r.passed = false;
        }
    std::vector<std::vector<mpz_class>> C(static_cast<std::size_t>(max_n + 1));
    for (int n = 0; n <= max_n; ++n) {
        C[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(n + 1));
        C[static_cast<std::size_t>(n)][0] = C[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)] = 1;
        for (int k = 1; k < n; ++k)
            C[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
                C[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] + C[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
    }
    for (int a1 = 0; a1 <= max_n; ++a1)
        for (int a2 = 0; a1 + a2 <= max_n; ++a2)
            for (int b1 = 0; b1 <= a1; ++b1)
                for (int b2 = 0; b2 <= a2; ++b2) {
                    ++r.binomial_pairs;
                    if (C[static_cast<std::size_t>(a1)][static_cast<std::size_t>(b1)] * C[static_cast<std::size_t>(a2)][static_cast<std::size_t>(b2)] >
                        C[static_cast<std::size_t>(a1 + a2)][static_cast<std::size_t>(b1 + b2)])
                        r.passed = false;
                }
    return r;
}

KrBoundResult verify_kr_bound(int max_k) {
    if (max_k < 0) throw DomainError("max_k must be nonnegative");
    KrBoundResult r;
    r.max_k = max_k;
    for (int den : {4, 3, 2}) {
        const mpq_class rr(1, den);
        const mpq_class bound = 1 / (1 - rr);
        mpq_class pw = 1, best = 0;
        for (int k = 0; k <= max_k; ++k) {
            const mpq_class v = pw * k;
            if (v > best) best = v;
            if (v > bound) r.passed = false;
            pw *= rr;
        }
        r.r.push_back(rr.get_d());
        r.sup_kr.push_back(best.get_d());
        r.bound.push_back(bound.get_d());
    }
    return r;
}

InitBoundResult verify_init_bound(const ScalarField& u0, const ScalarField& u1, double eta, double rho0, const NormOptions& opts) {
    opts.validate();
    InitBoundResult r;
    const double ell = u0.grid()->ell();
    const auto s = make_initial_state(u0, u1, eta);
    const auto rep = norm_report(s, rho0, opts);
    r.X0 = rep.X();
    const auto n0 = gevrey_space_norm(u0, 2.0 * rho0, ell, opts.Mmax, opts.Kmax, opts.tail_tol, opts.chop_tol);
    const auto n1 = gevrey_space_norm(u1, 2.0 * rho0, ell + 1.0, opts.Mmax, opts.Kmax, opts.tail_tol, opts.chop_tol);
    const auto a0 = gevrey_space_norm(u0, rho0, ell, opts.Mmax, opts.Kmax, opts.tail_tol, opts.chop_tol);
    const auto a1 = gevrey_space_norm(u1, rho0, ell + 1.0, opts.Mmax, opts.Kmax, opts.tail_tol, opts.chop_tol);
    r.norm_u0 = n0.value();
    r.norm_u1 = n1.value();
    r.norm_u0_rho0 = a0.value();
    r.norm_u1_rho0 = a1.value();
    const double D = r.norm_u0 + r.norm_u1;
    const double D0 = r.norm_u0_rho0 + r.norm_u1_rho0;
    r.C0_emp = D > 0.0 ? r.X0 / D : 0.0;
    r.C0_emp_rho0 = D0 > 0.0 ? r.X0 / D0 : 0.0;
    r.converged = rep.converged && n0.converged && n1.converged;
    r.inconclusive = !(n0.converged && n1.converged);
    r.kr = verify_kr_bound(200);
    return r;
}

double WeightAgreement::max_rel() const { return std::max({max_rel_H, max_rel_N, max_rel_L}); }

WeightAgreement compare_float_weights(const ExactRho& rho, int max_m, int max_k) {
    using big = boost::multiprecision::cpp_bin_float_50;
    if (max_m < 0 || max_k < 0) throw DomainError("index bounds must be nonnegative");
    const PrimeTables T(2 * (max_m + max_k) + 16, rho);
    std::vector<big> logp(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) logp[i] = boost::multiprecision::log(big(T.primes()[i]));
    auto exact_log = [&](const ExpVec& e) {
        big acc = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) acc += e[i] * logp[i];
        return acc;
    };
    // Squared exact weights against the float weights themselves.
    auto rel = [](const big& log_exact_sq, double log_float) {
        const big d = big(log_float) - log_exact_sq / 2;
        return static_cast<double>(boost::multiprecision::abs(boost::multiprecision::expm1(d)));
    };
    const double r = rho.value();
    WeightAgreement out;
    Term t(T);
    for (int m = 0; m <= max_m; ++m) {
        for (int k = 0; k <= max_k; ++k) {
            t.reset();
            t.H2(m, k, 1);
            t.finish();
            out.max_rel_H = std::max(out.max_rel_H, rel(exact_log(t.e), log_weight_H(r, m, k)));
        }
        t.reset();
        t.N2(m, 1);
        t.finish();
        out.max_rel_N = std::max(out.max_rel_N, rel(exact_log(t.e), log_weight_N(r, m)));
    }
    for (int k = 0; k <= max_k; ++k) {
        t.reset();
        t.L2(k, 1);
        t.finish();
        out.max_rel_L = std::max(out.max_rel_L, rel(exact_log(t.e), log_weight_L(r, k)));
    }
    return out;
}

std::string to_json(const InequalityCertificate& c) {
    nlohmann::json j;
    j["id"] = to_string(c.id);
    j["range"] = {{"outer_index", c.outer_index}, {"max", c.max_outer}};
    j["rho"] = c.rho.str();
    j["sup_ratio_sq"] = {{"numerator", c.sup_num}, {"denominator", c.sup_den}, {"approx", c.sup_approx}};
    nlohmann::json arg = nlohmann::json::object();
    for (std::size_t n = 0; n < c.argmax.size() && n < c.argmax_names.size(); ++n) arg[c.argmax_names[n]] = c.argmax[n];
    j["argmax"] = arg;
    j["rho_power"] = c.rho_power;
    j["monotone_tail"] = c.monotone_tail;
    j["passed"] = c.passed;
    j["evaluated"] = c.evaluated;
    j["wall_seconds"] = c.wall_seconds;
    return j.dump(2);
}

}  // namespace hyprandtl
