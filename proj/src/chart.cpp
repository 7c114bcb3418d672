#include "scalrig/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scalrig/error.hpp"

namespace scalrig {

// ---------------------------------------------------------------- Box

Box Box::cube(int dim, double lo, double hi)
{
    return Box{std::vector<double>(static_cast<std::size_t>(dim), lo), std::vector<double>(static_cast<std::size_t>(dim), hi)};
}

bool Box::contains(std::span<const double> point) const
{
    if (point.size() != lower.size()) return false;
    for (std::size_t i = 0; i < point.size(); ++i)
        if (!(point[i] >= lower[i] && point[i] <= upper[i])) return false;
    return true;
}

std::vector<double> Box::center() const
{
    std::vector<double> c(lower.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
}

// ---------------------------------------------------------------- fields

JetMatrix TensorField::jets(std::span<const double> point, int order) const
{
    if (static_cast<int>(point.size()) != dimension())
        throw ValidationError("point has " + std::to_string(point.size()) + " coordinates, metric dimension is " +
                              std::to_string(dimension()));
    if (!domain().contains(point)) throw ValidationError("point outside the metric domain");
    if (order < 0 || order > max_order())
        throw ValidationError("jet order " + std::to_string(order) + " exceeds what this field supports (" +
                              std::to_string(max_order()) + ")");
    return compute_jets(point, order);
}

ChartMetric::ChartMetric(int dim, Box domain, Array2<Expression> components)
    : dim_(dim), domain_(std::move(domain)), components_(std::move(components))
{
    if (dim < 2 || dim > kMaxJetVars) throw ValidationError("chart dimension must be in 2..8");
    if (domain_.dimension() != dim) throw ValidationError("domain dimension does not match metric dimension");
    for (int i = 0; i < dim; ++i)
        if (!(domain_.lower[i] < domain_.upper[i])) throw ValidationError("empty domain interval for x" + std::to_string(i + 1));
    if (components_.size() != dim) throw ValidationError("component array has the wrong size");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j)
            if (components_(i, j).max_variable() > dim)
                throw ValidationError("component g_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) +
                                      " uses a variable beyond the dimension");
}

std::shared_ptr<ChartMetric> ChartMetric::from_strings(int dim, Box domain,
                                                       const std::vector<std::vector<std::string>>& lower)
{
    if (dim < 2 || dim > kMaxJetVars) throw ValidationError("chart dimension must be in 2..8");
    if (static_cast<int>(lower.size()) != dim) throw ValidationError("need one component row per dimension");
    Array2<Expression> comps(dim);
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(lower[i].size()) < i + 1) throw ValidationError("component row too short");
        for (int j = 0; j <= i; ++j) comps(i, j) = Expression::parse(lower[i][j], dim);
    }
    return std::make_shared<ChartMetric>(dim, std::move(domain), std::move(comps));
}

JetMatrix ChartMetric::compute_jets(std::span<const double> point, int order) const
{
    const std::vector<Jet> vars = make_variables(point, order);
    const std::span<const Jet> view(vars);
    JetMatrix g(dim_, vars.front());
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j <= i; ++j) {
            g(i, j) = components_(i, j).evaluate<Jet>(view);
            if (j != i) g(j, i) = g(i, j);
        }
    return g;
}

TracelessDeformedField::TracelessDeformedField(FieldPtr base, double s) : base_(std::move(base)), s_(s)
{
    if (!base_) throw ValidationError("null base field");
    if (!std::isfinite(s)) throw ValidationError("deformation parameter must be finite");
}

JetMatrix TracelessDeformedField::compute_jets(std::span<const double> point, int order) const
{
    const CurvatureJets c = curvature_jets(base_->jets(point, order + 2));
    const int n = dimension();
    const JetMatrix g = truncated(c.metric, order);
    const Jet shift = c.scalar * (1.0 / n);
    JetMatrix out(n, g(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = g(i, j) - s_ * (c.ricci(i, j) - shift * g(i, j));
    return out;
}

ConformalField::ConformalField(FieldPtr base, Expression u, double s) : base_(std::move(base)), u_(std::move(u)), s_(s)
{
    if (!base_) throw ValidationError("null base field");
    if (u_.max_variable() > base_->dimension()) throw ValidationError("conformal factor uses a variable beyond the dimension");
}

JetMatrix ConformalField::compute_jets(std::span<const double> point, int order) const
{
    JetMatrix g = base_->jets(point, order);
    const std::vector<Jet> vars = make_variables(point, order);
    const Jet factor = 1.0 + s_ * u_.evaluate<Jet>(std::span<const Jet>(vars));
    if (!(factor.value() > 0.0)) throw GeometryError("conformal factor 1 + s*u is non-positive");
    const int n = dimension();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = factor * g(i, j);
    return g;
}

CombinationField::CombinationField(FieldPtr g, FieldPtr h, double t) : g_(std::move(g)), h_(std::move(h)), t_(t)
{
    if (!g_ || !h_) throw ValidationError("null field");
    if (g_->dimension() != h_->dimension()) throw ValidationError("fields have different dimensions");
}

int CombinationField::max_order() const { return std::min(g_->max_order(), h_->max_order()); }

JetMatrix CombinationField::compute_jets(std::span<const double> point, int order) const
{
    JetMatrix g = g_->jets(point, order);
    const JetMatrix h = h_->jets(point, order);
    const int n = dimension();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) += t_ * h(i, j);
    return g;
}

RicciField::RicciField(FieldPtr base, double factor) : base_(std::move(base)), factor_(factor)
{
    if (!base_) throw ValidationError("null base field");
}

JetMatrix RicciField::compute_jets(std::span<const double> point, int order) const
{
    CurvatureJets c = curvature_jets(base_->jets(point, order + 2));
    const int n = dimension();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.ricci(i, j) *= factor_;
    return c.ricci;
}

// ---------------------------------------------------------------- jet curvature

Matrix values(const JetMatrix& m)
{
    const int n = m.size();
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m(i, j).value();
    return out;
}

Christoffel values(const JetChristoffel& c)
{
    const int n = c.size();
    Christoffel out(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(k, i, j) = c(k, i, j).value();
    return out;
}

JetMatrix truncated(const JetMatrix& m, int order)
{
    const int n = m.size();
    JetMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m(i, j).truncated(order);
    return out;
}

namespace {

JetChristoffel truncated(const JetChristoffel& c, int order)
{
    const int n = c.size();
    JetChristoffel out(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(k, i, j) = c(k, i, j).truncated(order);
    return out;
}

void require_spd_jets(const JetMatrix& metric)
{
    require_spd(values(metric), "metric at point");
}

}  // namespace

JetChristoffel christoffel_jets(const JetMatrix& metric, const JetMatrix& inverse)
{
    const int n = metric.size();
    const int order = metric(0, 0).order();
    if (order < 1) throw ValidationError("Christoffel symbols need metric jets of order >= 1");

    // dg[l](i, j) = d_l g_ij
    std::vector<JetMatrix> dg;
    dg.reserve(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        JetMatrix d(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                d(i, j) = metric(i, j).derivative(l);
                d(j, i) = d(i, j);
            }
        dg.push_back(std::move(d));
    }
    const JetMatrix inv = truncated(inverse, order - 1);

    JetChristoffel gamma(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                Jet sum = Jet::constant_like(dg[0](0, 0), 0.0);
                for (int l = 0; l < n; ++l) sum += inv(k, l) * (dg[i](l, j) + dg[j](i, l) - dg[l](i, j));
                sum *= 0.5;
                gamma(k, i, j) = sum;
                gamma(k, j, i) = std::move(sum);
            }
    return gamma;
}

CurvatureJets curvature_jets(const JetMatrix& metric)
{
    const int n = metric.size();
    const int order = metric(0, 0).order();
    if (order < 2) throw ValidationError("curvature needs metric jets of order >= 2");
    require_spd_jets(metric);

    CurvatureJets c;
    c.order = order;
    c.metric = metric;
    c.inverse = invert(metric);
    c.christoffel = christoffel_jets(metric, c.inverse);

    const JetChristoffel gam = truncated(c.christoffel, order - 2);
    // contracted[p] = Gamma^k_kp
    std::vector<Jet> contracted(static_cast<std::size_t>(n), Jet::constant_like(gam(0, 0, 0), 0.0));
    for (int p = 0; p < n; ++p)
        for (int k = 0; k < n; ++k) contracted[p] += gam(k, k, p);

    c.ricci = JetMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            Jet r = Jet::constant_like(gam(0, 0, 0), 0.0);
            for (int k = 0; k < n; ++k) {
                r += c.christoffel(k, i, j).derivative(k);
                r -= c.christoffel(k, i, k).derivative(j);
                r += contracted[k] * gam(k, i, j);
                for (int p = 0; p < n; ++p) r -= gam(k, j, p) * gam(p, i, k);
            }
            c.ricci(i, j) = r;
            c.ricci(j, i) = std::move(r);
        }

    const JetMatrix inv = truncated(c.inverse, order - 2);
    Jet scalar = Jet::constant_like(gam(0, 0, 0), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scalar += inv(i, j) * c.ricci(i, j);
    c.scalar = std::move(scalar);
    return c;
}

// ---------------------------------------------------------------- reports

CurvatureReport make_report(std::vector<double> point, const Matrix& metric, const Matrix& ricci, Christoffel christoffel,
                            std::optional<double> laplacian_scalar)
{
    require_spd(metric, "metric at point");
    const int n = static_cast<int>(metric.rows());
    CurvatureReport r;
    r.point = std::move(point);
    r.metric = metric;
    r.inverse_metric = symmetrized(metric.inverse());
    r.christoffel = std::move(christoffel);
    r.ricci = symmetrized(ricci);
    r.scalar = (r.inverse_metric.cwiseProduct(r.ricci)).sum();
    r.traceless_ricci = r.ricci - (r.scalar / n) * r.metric;
    r.ricci_eigs = pencil_eigenvalues(r.ricci, r.metric);
    const Matrix a = r.inverse_metric * r.traceless_ricci;
    r.traceless_norm_sq = (a * a).trace();
    r.laplacian_scalar = laplacian_scalar;
    return r;
}

double laplacian(const Jet& f, const Matrix& inverse_metric, const Christoffel& gamma)
{
    if (f.order() < 2) throw ValidationError("Laplacian needs a jet of order >= 2");
    const int n = static_cast<int>(inverse_metric.rows());
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double term = f.hessian(i, j);
            for (int k = 0; k < n; ++k) term -= gamma(k, i, j) * f.gradient(k);
            sum += inverse_metric(i, j) * term;
        }
    return sum;
}

Christoffel christoffel(const TensorField& metric, std::span<const double> point)
{
    const JetMatrix g = metric.jets(point, 1);
    require_spd_jets(g);
    return values(christoffel_jets(g, invert(g)));
}

CurvatureReport curvature_report(const TensorField& metric, std::span<const double> point, bool with_laplacian)
{
    const CurvatureJets c = curvature_jets(metric.jets(point, with_laplacian ? 4 : 2));
    const Matrix g = values(c.metric);
    const Christoffel gamma = values(c.christoffel);
    std::optional<double> lap;
    if (with_laplacian) lap = laplacian(c.scalar, symmetrized(values(c.inverse)), gamma);
    return make_report(std::vector<double>(point.begin(), point.end()), g, values(c.ricci), gamma, lap);
}

double function_laplacian(const TensorField& metric, const Expression& u, std::span<const double> point)
{
    const JetMatrix g = metric.jets(point, 1);
    require_spd_jets(g);
    const JetMatrix inv = invert(g);
    const Christoffel gamma = values(christoffel_jets(g, inv));
    const std::vector<Jet> vars = make_variables(point, 2);
    const Jet uj = u.evaluate<Jet>(std::span<const Jet>(vars));
    return laplacian(uj, values(inv), gamma);
}

// ---------------------------------------------------------------- background comparison

namespace {

struct BackgroundData {
    JetMatrix g;                 // order K
    JetMatrix g_inv;             // order K
    JetChristoffel gamma_bar;    // order K-1
    JetChristoffel w;            // order K-1
};

void require_compatible(const TensorField& g, const TensorField& g_bar)
{
    if (g.dimension() != g_bar.dimension()) throw ValidationError("metrics have different dimensions");
}

// W^k_ij = 1/2 g^{kl} (∇̄_i g_lj + ∇̄_j g_il - ∇̄_l g_ij), with
// ∇̄_i g_lj = d_i g_lj - g_pj Γ̄^p_il - g_lp Γ̄^p_ij.
BackgroundData covariant_difference(const TensorField& gf, const TensorField& gbf, std::span<const double> point, int order)
{
    const int n = gf.dimension();
    BackgroundData d;
    d.g = gf.jets(point, order);
    const JetMatrix gb = gbf.jets(point, order);
    require_spd_jets(d.g);
    require_spd_jets(gb);
    d.g_inv = invert(d.g);
    d.gamma_bar = christoffel_jets(gb, invert(gb));

    const JetMatrix g1 = truncated(d.g, order - 1);
    // cov(i, l, j) = ∇̄_i g_lj
    Array3<Jet> cov(n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
            for (int j = 0; j < n; ++j) {
                Jet v = d.g(l, j).derivative(i);
                for (int p = 0; p < n; ++p) {
                    v -= g1(p, j) * d.gamma_bar(p, i, l);
                    v -= g1(l, p) * d.gamma_bar(p, i, j);
                }
                cov(i, l, j) = std::move(v);
            }

    const JetMatrix inv1 = truncated(d.g_inv, order - 1);
    d.w = JetChristoffel(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet v = Jet::constant_like(cov(0, 0, 0), 0.0);
                for (int l = 0; l < n; ++l) v += inv1(k, l) * (cov(i, l, j) + cov(j, i, l) - cov(l, i, j));
                d.w(k, i, j) = 0.5 * v;
            }
    return d;
}

}  // namespace

DifferenceTensor difference_tensor(const TensorField& g, const TensorField& g_bar, std::span<const double> point)
{
    require_compatible(g, g_bar);
    const BackgroundData d = covariant_difference(g, g_bar, point, 1);
    const Christoffel gamma = values(christoffel_jets(d.g, d.g_inv));
    const Christoffel gamma_bar = values(d.gamma_bar);
    const int n = g.dimension();
    DifferenceTensor out;
    out.connection_difference = Christoffel(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.connection_difference(k, i, j) = gamma(k, i, j) - gamma_bar(k, i, j);
    out.covariant_formula = values(d.w);
    out.discrepancy = max_abs_difference(out.connection_difference, out.covariant_formula);
    return out;
}

Matrix ricci_via_background(const TensorField& g, const TensorField& g_bar, std::span<const double> point)
{
    require_compatible(g, g_bar);
    const int n = g.dimension();
    const BackgroundData d = covariant_difference(g, g_bar, point, 2);
    const Matrix ric_bar = values(curvature_jets(g_bar.jets(point, 2)).ricci);
    const Christoffel gb = values(d.gamma_bar);
    const Christoffel w = values(d.w);

    // dw(m, k, i, j) = d_m W^k_ij
    auto dw = [&](int m, int k, int i, int j) { return d.w(k, i, j).gradient(m); };

    Matrix ric(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double div_w = 0.0;    // ∇̄_k W^k_ij
            double grad_tr = 0.0;  // ∇̄_i W^k_kj
            double quad = 0.0;
            for (int k = 0; k < n; ++k) {
                div_w += dw(k, k, i, j);
                grad_tr += dw(i, k, k, j);
                for (int p = 0; p < n; ++p) {
                    div_w += gb(k, k, p) * w(p, i, j) - gb(p, k, i) * w(k, p, j) - gb(p, k, j) * w(k, i, p);
                    grad_tr += gb(k, i, p) * w(p, k, j) - gb(p, i, k) * w(k, p, j) - gb(p, i, j) * w(k, k, p);
                    quad += w(p, i, j) * w(k, k, p) - w(p, k, j) * w(k, i, p);
                }
            }
            ric(i, j) = ric_bar(i, j) + div_w - grad_tr + quad;
        }
    return symmetrized(ric);
}

// ---------------------------------------------------------------- linearization

double linearized_scalar(const TensorField& gf, const TensorField& hf, std::span<const double> point)
{
    require_compatible(gf, hf);
    const int n = gf.dimension();
    const CurvatureJets c = curvature_jets(gf.jets(point, 2));
    const JetMatrix h = hf.jets(point, 2);
    const Matrix ginv = symmetrized(values(c.inverse));
    const Christoffel gamma = values(c.christoffel);
    const JetChristoffel& gj = c.christoffel;  // order 1

    // -Δ(tr h)
    Jet tr = Jet::constant_like(h(0, 0), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += c.inverse(i, j) * h(i, j);
    const double lap_tr = laplacian(tr, ginv, gamma);

    // div div h = g^{ab} g^{cd} ∇_a ∇_c h_bd, from the 2-jet of h and the 1-jet of Γ.
    // ∇_c h_bd = d_c h_bd - Γ^p_cb h_pd - Γ^p_cd h_bp  (kept as order-1 jets)
    Array3<Jet> dh(n);  // dh(c, b, d)
    const JetMatrix h1 = truncated(h, 1);
    for (int cc = 0; cc < n; ++cc)
        for (int b = 0; b < n; ++b)
            for (int dd = 0; dd < n; ++dd) {
                Jet v = h(b, dd).derivative(cc);
                for (int p = 0; p < n; ++p) v -= gj(p, cc, b) * h1(p, dd) + gj(p, cc, dd) * h1(b, p);
                dh(cc, b, dd) = std::move(v);
            }
    // ∇_a (∇h)_{c b d} = d_a dh_cbd - Γ^p_ac dh_pbd - Γ^p_ab dh_cpd - Γ^p_ad dh_cbp
    double divdiv = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (ginv(a, b) == 0.0) continue;
            for (int cc = 0; cc < n; ++cc)
                for (int dd = 0; dd < n; ++dd) {
                    if (ginv(cc, dd) == 0.0) continue;
                    double v = dh(cc, b, dd).gradient(a);
                    for (int p = 0; p < n; ++p)
                        v -= gamma(p, a, cc) * dh(p, b, dd).value() + gamma(p, a, b) * dh(cc, p, dd).value() +
                             gamma(p, a, dd) * dh(cc, b, p).value();
                    divdiv += ginv(a, b) * ginv(cc, dd) * v;
                }
        }

    // <Ric, h> = g^{ia} g^{jb} R_ij h_ab
    const Matrix ric = values(c.ricci);
    const Matrix hv = values(h);
    const double inner = (ginv * ric * ginv).cwiseProduct(hv).sum();
    return -lap_tr + divdiv - inner;
}

ExpansionReport expansion_residual(const FieldPtr& g, const FieldPtr& h, std::span<const double> point,
                                   std::span<const double> t_grid)
{
    if (!g || !h) throw ValidationError("null field");
    require_compatible(*g, *h);
    if (t_grid.empty()) throw ValidationError("empty t grid");

    ExpansionReport rep;
    const double r0 = curvature_report(*g, point, false).scalar;
    rep.linearization = linearized_scalar(*g, *h, point);

    const Matrix gv = values(g->jets(point, 0));
    const Matrix hv = values(h->jets(point, 0));
    const Matrix ginv = gv.inverse();

    for (double t : t_grid) {
        const Matrix gt = gv + t * hv;
        if (!is_spd(gt)) throw GeometryError("g + t*h is not positive definite at t = " + std::to_string(t));
        const CombinationField perturbed(g, h, t);
        const double rt = curvature_report(perturbed, point, false).scalar;
        rep.t.push_back(t);
        rep.residual.push_back(rt - r0 - t * rep.linearization);

        const Matrix gtinv = gt.inverse();
        const Matrix rhs = ginv - t * ginv * hv * ginv + t * t * gtinv * hv * ginv * hv * ginv;
        const double scale = std::max(1.0, gtinv.cwiseAbs().maxCoeff());
        rep.inverse_identity_residual =
            std::max(rep.inverse_identity_residual, (gtinv - rhs).cwiseAbs().maxCoeff() / scale);
    }

    rep.residual_identically_zero =
        std::all_of(rep.residual.begin(), rep.residual.end(), [](double r) { return r == 0.0; });
    rep.slope = loglog_slope(rep.t, rep.residual);
    return rep;
}

double bianchi_residual(const TensorField& gf, std::span<const double> point)
{
    const int n = gf.dimension();
    const CurvatureJets c = curvature_jets(gf.jets(point, 3));
    const Matrix ginv = symmetrized(values(c.inverse));
    const Christoffel gamma = values(c.christoffel);
    const Matrix ric = values(c.ricci);

    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double div = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double v = c.ricci(i, j).gradient(k);
                for (int p = 0; p < n; ++p) v -= gamma(p, k, i) * ric(p, j) + gamma(p, k, j) * ric(i, p);
                div += ginv(i, k) * v;
            }
        worst = std::max(worst, std::abs(div - 0.5 * c.scalar.gradient(j)));
    }
    return worst;
}

}  // namespace scalrig
