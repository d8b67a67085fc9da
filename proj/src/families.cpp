#include "zlab/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace zlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::int64_t get_int(const FamilySpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw std::invalid_argument(spec.name + " requires parameter '" + key + "'");
    const double v = it->second;
    const auto r = static_cast<std::int64_t>(std::llround(v));
    if (static_cast<double>(r) != v)
        throw std::invalid_argument("parameter '" + key + "' must be an integer");
    return r;
}

std::int64_t get_int_or(const FamilySpec& spec, const std::string& key, std::int64_t fallback) {
    return spec.params.count(key) ? get_int(spec, key) : fallback;
}

double get_real(const FamilySpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw std::invalid_argument(spec.name + " requires parameter '" + key + "'");
    return it->second;
}

std::string spec_string(const FamilySpec& spec) {
    std::string out;
    for (const auto& [key, value] : spec.params) {
        if (!out.empty()) out += ";";
        out += key + "=";
        if (value == std::floor(value) && std::abs(value) < 1e15)
            out += std::to_string(static_cast<long long>(value));
        else
            out += std::to_string(value);
    }
    if (!spec.residues.empty()) {
        out += out.empty() ? "s=" : ";s=";
        for (std::size_t i = 0; i < spec.residues.size(); ++i)
            out += (i ? "+" : "") + std::to_string(spec.residues[i]);
    }
    if (spec.seed != 0) out += (out.empty() ? "" : ";") + std::string("seed=") + std::to_string(spec.seed);
    return out;
}

// Canonical representatives of the projective plane over Z_q: first nonzero
// coordinate scaled to 1, listed lexicographically.
std::vector<std::array<std::int64_t, 3>> projective_points(std::int64_t q) {
    std::vector<std::array<std::int64_t, 3>> pts;
    pts.push_back({0, 0, 1});
    for (std::int64_t z = 0; z < q; ++z) pts.push_back({0, 1, z});
    for (std::int64_t y = 0; y < q; ++y)
        for (std::int64_t z = 0; z < q; ++z) pts.push_back({1, y, z});
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::array<std::int64_t, 3> parse_triple(const std::string& s) {
    std::array<std::int64_t, 3> t{};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t next = i < 2 ? s.find(':', pos) : s.size();
        if (next == std::string::npos) throw std::invalid_argument("bad projective coordinate: " + s);
        t[static_cast<std::size_t>(i)] = std::stoll(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return t;
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& s, char sep) {
    const auto cut = s.find(sep);
    if (cut == std::string::npos) throw std::invalid_argument("bad coordinate pair: " + s);
    return {std::stoll(s.substr(0, cut)), std::stoll(s.substr(cut + 1))};
}

Relation projective_plane(const FamilySpec& spec) {
    const std::int64_t q = get_int(spec, "q");
    if (!is_prime(q)) throw std::invalid_argument("projective_plane requires a prime q");
    const auto pts = projective_points(q);
    ElementList ids;
    ids.reserve(pts.size());
    for (const auto& p : pts)
        ids.push_back(std::to_string(p[0]) + ":" + std::to_string(p[1]) + ":" + std::to_string(p[2]));

    Relation rel;
    rel.k = 2;
    rel.classes = {ids, ids};
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.membership = [q](const std::vector<std::string>& t) {
        const auto p = parse_triple(t[0]);
        const auto l = parse_triple(t[1]);
        return (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0;
    };
    return rel;
}

Relation grid_point_line(const FamilySpec& spec) {
    const std::int64_t m = get_int(spec, "m");
    const std::int64_t p = get_int(spec, "p");
    if (m < 1) throw std::invalid_argument("grid_point_line requires m >= 1");
    if (!is_prime(p)) throw std::invalid_argument("grid_point_line requires a prime p");

    ElementList points, lines;
    for (std::int64_t x = 0; x < m; ++x)
        for (std::int64_t y = 0; y < m; ++y) points.push_back(std::to_string(x) + "," + std::to_string(y));
    for (std::int64_t a = 0; a < p; ++a)
        for (std::int64_t b = 0; b < p; ++b) lines.push_back(std::to_string(a) + "," + std::to_string(b));

    Relation rel;
    rel.k = 2;
    rel.classes = {std::move(points), std::move(lines)};
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.membership = [p](const std::vector<std::string>& t) {
        const auto [x, y] = parse_pair(t[0], ',');
        const auto [a, b] = parse_pair(t[1], ',');
        return ((y - a * x - b) % p + p) % p == 0;
    };
    return rel;
}

Relation order_family(const FamilySpec& spec) {
    const std::int64_t n = get_int(spec, "n");
    if (n < 0) throw std::invalid_argument("order requires n >= 0");
    ElementList ids;
    for (std::int64_t v = 1; v <= n; ++v) ids.push_back(std::to_string(v));
    Relation rel;
    rel.k = 2;
    rel.classes = {ids, ids};
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.membership = [](const std::vector<std::string>& t) { return std::stoll(t[0]) < std::stoll(t[1]); };
    return rel;
}

Relation interval_overlap(const FamilySpec& spec) {
    const std::int64_t n = get_int(spec, "n");
    if (n < 0) throw std::invalid_argument("interval_overlap requires n >= 0");
    ElementList ids;
    std::uint64_t state = spec.seed;
    const std::int64_t span = std::max<std::int64_t>(4 * n, 8);
    for (std::int64_t i = 0; i < n; ++i) {
        state = splitmix64(state);
        const std::int64_t a = static_cast<std::int64_t>(state % static_cast<std::uint64_t>(span));
        state = splitmix64(state);
        const std::int64_t len = 1 + static_cast<std::int64_t>(state % static_cast<std::uint64_t>(std::max<std::int64_t>(span / 2, 1)));
        ids.push_back(std::to_string(i) + ":" + std::to_string(a) + "-" + std::to_string(a + len));
    }
    Relation rel;
    rel.k = 2;
    rel.classes = {ids, ids};
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.seed = spec.seed;
    rel.membership = [](const std::vector<std::string>& t) {
        auto bounds = [](const std::string& s) {
            const auto colon = s.find(':');
            return parse_pair(s.substr(colon + 1), '-');
        };
        const auto [a1, b1] = bounds(t[0]);
        const auto [a2, b2] = bounds(t[1]);
        return std::max(a1, a2) <= std::min(b1, b2);
    };
    return rel;
}

Relation box_order(const FamilySpec& spec) {
    const std::int64_t n = get_int(spec, "n");
    const std::int64_t dim = get_int(spec, "dim");
    if (n < 0 || dim < 1) throw std::invalid_argument("box_order requires n >= 0 and dim >= 1");
    std::int64_t side = 1;
    while (std::pow(static_cast<double>(side), static_cast<double>(dim)) < static_cast<double>(n)) ++side;

    ElementList ids;
    std::vector<std::int64_t> coord(static_cast<std::size_t>(dim), 0);
    for (std::int64_t count = 0; count < n;) {
        std::string id;
        for (std::size_t d = 0; d < coord.size(); ++d) id += (d ? "," : "") + std::to_string(coord[d]);
        ids.push_back(std::move(id));
        ++count;
        std::size_t pos = coord.size();
        while (pos-- > 0) {
            if (++coord[pos] < side) break;
            coord[pos] = 0;
        }
    }

    Relation rel;
    rel.k = 2;
    rel.classes = {ids, ids};
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.membership = [dim](const std::vector<std::string>& t) {
        auto parse = [dim](const std::string& s) {
            std::vector<std::int64_t> v;
            std::size_t pos = 0;
            while (v.size() < static_cast<std::size_t>(dim)) {
                auto next = s.find(',', pos);
                v.push_back(std::stoll(s.substr(pos, next == std::string::npos ? next : next - pos)));
                if (next == std::string::npos) break;
                pos = next + 1;
            }
            return v;
        };
        const auto a = parse(t[0]);
        const auto b = parse(t[1]);
        if (a == b) return false;
        for (std::size_t d = 0; d < a.size(); ++d)
            if (a[d] > b[d]) return false;
        return true;
    };
    return rel;
}

Relation modular_sum(const FamilySpec& spec) {
    const std::int64_t k = get_int(spec, "k");
    const std::int64_t n = get_int(spec, "n");
    if (k < 1) throw std::invalid_argument("modular_sum requires k >= 1");
    if (n < 2) throw std::invalid_argument("modular_sum requires modulus >= 2");
    if (spec.residues.empty()) throw std::invalid_argument("modular_sum requires a target residue set");
    std::vector<std::int64_t> targets;
    for (auto s : spec.residues) targets.push_back(((s % n) + n) % n);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    ElementList residues;
    for (std::int64_t v = 0; v < n; ++v) residues.push_back(std::to_string(v));

    Relation rel;
    rel.k = static_cast<int>(k);
    rel.classes.assign(static_cast<std::size_t>(k), residues);
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.membership = [n, targets](const std::vector<std::string>& t) {
        std::int64_t sum = 0;
        for (const auto& s : t) sum += std::stoll(s);
        return std::binary_search(targets.begin(), targets.end(), ((sum % n) + n) % n);
    };
    return rel;
}

Relation random_family(const FamilySpec& spec) {
    const std::int64_t k = get_int(spec, "k");
    if (k < 1) throw std::invalid_argument("random requires k >= 1");
    const double p = get_real(spec, "p");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random requires probability p in [0,1]");

    std::vector<std::int64_t> sizes(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        const auto key = "n" + std::to_string(i + 1);
        const std::int64_t ni = spec.params.count(key) ? get_int(spec, key) : get_int_or(spec, "n", -1);
        if (ni < 0) throw std::invalid_argument("random requires n or n1..nk");
        sizes[static_cast<std::size_t>(i)] = ni;
    }

    Relation rel;
    rel.k = static_cast<int>(k);
    for (auto n : sizes) {
        ElementList ids;
        for (std::int64_t v = 0; v < n; ++v) ids.push_back(std::to_string(v));
        rel.classes.push_back(std::move(ids));
    }
    rel.family = spec.name;
    rel.params = spec_string(spec);
    rel.seed = spec.seed;
    const std::uint64_t seed = spec.seed;
    rel.membership = [seed, p](const std::vector<std::string>& t) {
        std::uint64_t h = splitmix64(seed);
        for (const auto& s : t) h = splitmix64(h ^ fnv1a(s));
        const double x = static_cast<double>(h >> 11) * 0x1.0p-53;
        return x < p;
    };
    return rel;
}

} // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Relation generate_family(const FamilySpec& spec) {
    if (spec.name == "projective_plane") return projective_plane(spec);
    if (spec.name == "grid_point_line") return grid_point_line(spec);
    if (spec.name == "order") return order_family(spec);
    if (spec.name == "interval_overlap") return interval_overlap(spec);
    if (spec.name == "box_order") return box_order(spec);
    if (spec.name == "modular_sum") return modular_sum(spec);
    if (spec.name == "random") return random_family(spec);
    throw std::invalid_argument("unknown family: " + spec.name);
}

std::vector<IncidenceRow> extremal_incidence_counts(const std::vector<std::int64_t>& q_list) {
    std::vector<IncidenceRow> rows;
    for (auto q : q_list) {
        if (!is_prime(q)) throw std::invalid_argument("q must be prime");
        if (q > 13) throw std::invalid_argument("q must be <= 13");
        FamilySpec spec;
        spec.name = "projective_plane";
        spec.params["q"] = static_cast<double>(q);
        const Instance inst = induce_canonical(generate_family(spec));
        IncidenceRow row;
        row.q = q;
        row.points = inst.class_size(0);
        row.lines = inst.class_size(1);
        row.incidences = inst.edge_count();
        row.k22_free = !contains_complete(inst, 2);
        rows.push_back(row);
    }
    return rows;
}

} // namespace zlab
