#include "expamoeba/convexity.hpp"

#include <algorithm>
#include <cstdint>

#include "expamoeba/errors.hpp"

namespace expamoeba {

namespace {

using Pt = std::pair<std::int64_t, std::int64_t>;  // (col, row)

std::int64_t cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Counterclockwise hull without collinear points.
std::vector<Pt> hull(std::vector<Pt> p) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Pt> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

bool inside(const std::vector<Pt>& h, const Pt& q) {
    if (h.size() == 1) return q == h[0];
    if (h.size() == 2) {
        if (cross(h[0], h[1], q) != 0) return false;
        return std::min(h[0].first, h[1].first) <= q.first && q.first <= std::max(h[0].first, h[1].first) &&
               std::min(h[0].second, h[1].second) <= q.second && q.second <= std::max(h[0].second, h[1].second);
    }
    for (std::size_t i = 0; i < h.size(); ++i)
        if (cross(h[i], h[(i + 1) % h.size()], q) < 0) return false;
    return true;
}

}  // namespace

std::vector<int> component_labels(const Raster& r) {
    std::vector<int> label(r.rows * r.cols, -1);
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < label.size(); ++start) {
        if (label[start] != -1 || r.cells[start].kind != VerdictKind::CertifiedOut) continue;
        label[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            const std::size_t i = c / r.cols, j = c % r.cols;
            auto visit = [&](std::size_t ni, std::size_t nj) {
                const std::size_t q = ni * r.cols + nj;
                if (label[q] == -1 && r.cells[q].kind == VerdictKind::CertifiedOut) {
                    label[q] = next;
                    stack.push_back(q);
                }
            };
            if (i > 0) visit(i - 1, j);
            if (i + 1 < r.rows) visit(i + 1, j);
            if (j > 0) visit(i, j - 1);
            if (j + 1 < r.cols) visit(i, j + 1);
        }
        ++next;
    }
    return label;
}

std::vector<ComponentReport> complement_components(const Raster& r) {
    if (r.meta.components >= 2)
        throw UnsupportedOperation("convexity check is unsupported for m >= 1 (mapping has " +
                                   std::to_string(r.meta.components) + " components)");
    if (r.cells.size() != r.rows * r.cols) throw InputError("raster cell count does not match its resolution");

    const std::vector<int> label = component_labels(r);
    const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<Pt>> members(static_cast<std::size_t>(std::max(count, 0)));
    for (std::size_t c = 0; c < label.size(); ++c)
        if (label[c] >= 0)
            members[static_cast<std::size_t>(label[c])].emplace_back(static_cast<std::int64_t>(c % r.cols),
                                                                     static_cast<std::int64_t>(c / r.cols));

    auto on_rim = [&](std::int64_t j, std::int64_t i) {
        return i == 0 || j == 0 || i + 1 == static_cast<std::int64_t>(r.rows) ||
               j + 1 == static_cast<std::int64_t>(r.cols);
    };

    std::vector<ComponentReport> out;
    for (int id = 0; id < count; ++id) {
        const auto& pts = members[static_cast<std::size_t>(id)];
        ComponentReport rep;
        rep.id = static_cast<std::size_t>(id);
        rep.cells = pts.size();
        const std::vector<Pt> h = hull(pts);
        std::int64_t jlo = pts[0].first, jhi = jlo, ilo = pts[0].second, ihi = ilo;
        for (const auto& p : pts) {
            jlo = std::min(jlo, p.first), jhi = std::max(jhi, p.first);
            ilo = std::min(ilo, p.second), ihi = std::max(ihi, p.second);
            rep.touches_rim = rep.touches_rim || on_rim(p.first, p.second);
        }
        std::size_t counted = 0, foreign = 0;
        for (std::int64_t i = ilo; i <= ihi; ++i)
            for (std::int64_t j = jlo; j <= jhi; ++j) {
                if (on_rim(j, i) || !inside(h, {j, i})) continue;
                const std::size_t c = static_cast<std::size_t>(i) * r.cols + static_cast<std::size_t>(j);
                if (r.cells[c].kind == VerdictKind::Unknown) continue;
                ++counted;
                if (label[c] != id) ++foreign;
            }
        rep.hull_cells = counted;
        rep.convexity_defect = counted ? static_cast<double>(foreign) / static_cast<double>(counted) : 0.0;
        out.push_back(rep);
    }
    return out;
}

}  // namespace expamoeba
