#include "rumin/serialize.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rumin {

Json rational_to_json(const Rational& r) {
    Json j = Json::array();
    if (r.fits_int64()) {
        j.push_back(r.num_int64());
        j.push_back(r.den_int64());
    } else {
        j.push_back(r.num_str());
        j.push_back(r.den_str());
    }
    return j;
}

Rational rational_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("rational: expected [num, den]");
    auto part = [](const Json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        return std::to_string(v.get<long long>());
    };
    return Rational::parse(part(j[0]) + "/" + part(j[1]));
}

Json covector_to_json(const Covector& v) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = v.n();
    j["degree"] = v.degree();
    Json terms = Json::array();
    for (const auto& [m, c] : v.terms()) {
        Json t = Json::array();
        t.push_back(m.idx);
        Json r = rational_to_json(c);
        t.push_back(r[0]);
        t.push_back(r[1]);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

Covector covector_from_json(const Json& j) {
    Covector v(j.at("n").get<int>(), j.at("degree").get<int>());
    for (const auto& t : j.at("terms")) {
        WedgeMonomial m{t.at(0).get<std::vector<int>>()};
        Json r = Json::array({t.at(1), t.at(2)});
        v.add_term(m, rational_from_json(r));
    }
    return v;
}

Json e0_basis_to_json(const E0Basis& b) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = b.n;
    j["degree"] = b.h;
    j["dim"] = b.dim();
    Json xi = Json::array();
    for (const auto& v : b.xi) {
        Json entry = covector_to_json(v);
        entry.erase("schema_version");
        entry.erase("n");
        xi.push_back(entry);
    }
    j["xi"] = xi;
    Json gram = Json::array();
    for (const auto& g : b.gram_diag) gram.push_back(rational_to_json(g));
    j["gram_diag"] = gram;
    return j;
}

Json operator_polynomial_to_json(const OperatorPolynomial& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json t = Json::array();
        t.push_back(m.exp);
        Json r = rational_to_json(c);
        t.push_back(r[0]);
        t.push_back(r[1]);
        terms.push_back(t);
    }
    return terms;
}

OperatorPolynomial operator_polynomial_from_json(const Json& j, int n) {
    OperatorPolynomial p(n);
    for (const auto& t : j) {
        PBWMonomial m{t.at(0).get<std::vector<int>>()};
        Json r = Json::array({t.at(1), t.at(2)});
        p.add_term(m, rational_from_json(r));
    }
    return p;
}

Json operator_matrix_to_json(const OperatorMatrix& m) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = m.n();
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["source_degree"] = m.source_degree();
    j["target_degree"] = m.target_degree();
    Json entries = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(operator_polynomial_to_json(m.at(i, k)));
        entries.push_back(row);
    }
    j["entries"] = entries;
    return j;
}

OperatorMatrix operator_matrix_from_json(const Json& j) {
    int n = j.at("n").get<int>();
    OperatorMatrix m(n, j.at("rows").get<int>(), j.at("cols").get<int>(), j.at("source_degree").get<int>(),
                     j.at("target_degree").get<int>());
    const Json& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != m.rows())
        throw std::invalid_argument("operator matrix: row count mismatch");
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(entries[i].size()) != m.cols())
            throw std::invalid_argument("operator matrix: column count mismatch");
        for (int k = 0; k < m.cols(); ++k) m.at(i, k) = operator_polynomial_from_json(entries[i][k], n);
    }
    return m;
}

namespace {

std::string latex_polynomial(const OperatorPolynomial& p, int n) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rational v = c;
        if (first) {
            if (v.sign() < 0) { os << "-"; v = -v; }
        } else {
            os << (v.sign() < 0 ? " - " : " + ");
            if (v.sign() < 0) v = -v;
        }
        first = false;
        bool unit = (v == Rational(1));
        bool is_const = m.order() == 0;
        if (!unit || is_const) {
            if (v.is_integer()) os << v.str();
            else os << "\\tfrac{" << v.num_str() << "}{" << v.den_str() << "}";
        }
        for (size_t i = 0; i < m.exp.size(); ++i) {
            if (m.exp[i] == 0) continue;
            int idx = static_cast<int>(i) + 1;
            if (idx <= n) os << "X_{" << idx << "}";
            else if (idx <= 2 * n) os << "Y_{" << (idx - n) << "}";
            else os << "T";
            if (m.exp[i] > 1) os << "^{" << m.exp[i] << "}";
        }
    }
    return os.str();
}

} // namespace

std::string operator_matrix_to_latex(const OperatorMatrix& m) {
    std::ostringstream os;
    os << "\\begin{pmatrix}\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int k = 0; k < m.cols(); ++k) {
            os << latex_polynomial(m.at(i, k), m.n());
            if (k + 1 < m.cols()) os << " & ";
        }
        if (i + 1 < m.rows()) os << " \\\\";
        os << "\n";
    }
    os << "\\end{pmatrix}\n";
    return os.str();
}

Json symbol_to_json(const Symbol& s) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    if (std::holds_alternative<Symbol1>(s)) {
        const Symbol1& s1 = std::get<Symbol1>(s);
        j["order"] = 1;
        j["n"] = s1.n;
        j["source_degree"] = s1.h;
        j["dim_out"] = s1.n_out;
        j["dim_in"] = s1.n_in;
        Json f = Json::array();
        for (int I = 0; I < s1.n_out; ++I)
            for (int k = 0; k < s1.n_in; ++k)
                for (int i = 0; i < 2 * s1.n; ++i) {
                    if (s1.at(I, k, i).is_zero()) continue;
                    Json e = Json::array({I, k, i});
                    Json r = rational_to_json(s1.at(I, k, i));
                    e.push_back(r[0]);
                    e.push_back(r[1]);
                    f.push_back(e);
                }
        j["f"] = f;
    } else {
        const Symbol2& s2 = std::get<Symbol2>(s);
        j["order"] = 2;
        j["n"] = s2.n;
        j["source_degree"] = s2.n;
        j["dim_out"] = s2.n_out;
        j["dim_in"] = s2.n_in;
        Json f = Json::array();
        for (int I = 0; I < s2.n_out; ++I)
            for (int k = 0; k < s2.n_in; ++k)
                for (int i = 0; i < 2 * s2.n; ++i)
                    for (int jj = i; jj < 2 * s2.n; ++jj) {
                        if (s2.sym_at(I, k, i, jj).is_zero()) continue;
                        Json e = Json::array({I, k, i, jj});
                        Json r = rational_to_json(s2.sym_at(I, k, i, jj));
                        e.push_back(r[0]);
                        e.push_back(r[1]);
                        f.push_back(e);
                    }
        j["f_sym"] = f;
        Json tc = Json::array();
        for (int I = 0; I < s2.n_out; ++I)
            for (int k = 0; k < s2.n_in; ++k) {
                if (s2.t_at(I, k).is_zero()) continue;
                Json e = Json::array({I, k});
                Json r = rational_to_json(s2.t_at(I, k));
                e.push_back(r[0]);
                e.push_back(r[1]);
                tc.push_back(e);
            }
        j["t_coeff"] = tc;
    }
    return j;
}

Json left_inverse_to_json(const LeftInverse& li) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["order"] = li.order;
    j["n"] = li.n;
    j["source_degree"] = li.h;
    j["rows"] = li.b.rows();
    j["cols"] = li.b.cols();
    Json entries = Json::array();
    for (int i = 0; i < li.b.rows(); ++i)
        for (int k = 0; k < li.b.cols(); ++k) {
            if (li.b.at(i, k).is_zero()) continue;
            Json e = Json::array({i, k});
            Json r = rational_to_json(li.b.at(i, k));
            e.push_back(r[0]);
            e.push_back(r[1]);
            entries.push_back(e);
        }
    j["b"] = entries;
    return j;
}

namespace {

Json coordpoly_to_json(const CoordPolynomial& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json t = Json::array();
        t.push_back(m.exp);
        Json r = rational_to_json(c);
        t.push_back(r[0]);
        t.push_back(r[1]);
        terms.push_back(t);
    }
    return terms;
}

CoordPolynomial coordpoly_from_json(const Json& j, int n) {
    CoordPolynomial p(n);
    for (const auto& t : j) {
        CoordMonomial m{t.at(0).get<std::vector<int>>()};
        Json r = Json::array({t.at(1), t.at(2)});
        p.add_term(m, rational_from_json(r));
    }
    return p;
}

} // namespace

Json polyform_to_json(const PolyForm& u) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["type"] = "polyform";
    j["n"] = u.n;
    j["degree"] = u.h;
    Json comps = Json::array();
    for (const auto& c : u.comps) comps.push_back(coordpoly_to_json(c));
    j["comps"] = comps;
    return j;
}

PolyForm polyform_from_json(const Json& j) {
    PolyForm u;
    u.n = j.at("n").get<int>();
    u.h = j.at("degree").get<int>();
    int dim = e0_dim(u.n, u.h);
    const Json& comps = j.at("comps");
    if (static_cast<int>(comps.size()) != dim)
        throw std::invalid_argument("polyform: component count does not match dim E0");
    for (const auto& c : comps) u.comps.push_back(coordpoly_from_json(c, u.n));
    return u;
}

Json symbolic_decomposition_to_json(const SymbolicDecomposition& d) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "symbolic";
    j["n"] = d.n;
    j["degree"] = d.h;
    j["order"] = d.order;
    j["divergence_zero"] = d.divergence_zero;
    j["reconstruction_exact"] = d.reconstruction_exact;
    j["constant_c"] = d.constant_c;
    Json fields = Json::array();
    for (const auto& f : d.fields) {
        Json comps = Json::array();
        for (const auto& g : f) comps.push_back(coordpoly_to_json(g));
        fields.push_back(comps);
    }
    j["fields"] = fields;
    if (!d.sym_parts.empty()) {
        Json sp = Json::array();
        for (const auto& f : d.sym_parts) {
            Json comps = Json::array();
            for (const auto& g : f) comps.push_back(coordpoly_to_json(g));
            sp.push_back(comps);
        }
        j["sym_parts"] = sp;
    }
    return j;
}

Json grid_decomposition_to_json(const GridDecomposition& d) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "grid";
    j["n"] = d.n;
    j["degree"] = d.h;
    j["order"] = d.order;
    j["closedness_residual"] = d.closedness_residual;
    j["divergence_residual"] = d.divergence_residual;
    j["divergence_per_field"] = d.divergence_per_field;
    j["reconstruction_residual"] = d.reconstruction_residual;
    j["constant_c"] = d.constant_c;
    return j;
}

Json gn_report_to_json(const GnReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = r.n;
    j["degree"] = r.h;
    j["Q"] = r.q;
    j["case"] = r.case_id;
    j["hardy_proxy"] = r.hardy_proxy;
    j["left_exponent"] = r.left_exponent;
    j["left_norm"] = r.left_norm;
    Json rn = Json::array();
    for (const auto& [name, v] : r.right_norms) rn.push_back(Json{{"name", name}, {"value", v}});
    j["right_norms"] = rn;
    j["right_total"] = r.right_total;
    j["degenerate"] = r.degenerate;
    if (r.degenerate) j["ratio"] = nullptr;
    else j["ratio"] = r.ratio;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json dilation_report_to_json(const DilationReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["lambda"] = r.lambda;
    j["base"] = gn_report_to_json(r.base);
    j["scaled"] = gn_report_to_json(r.scaled);
    j["rel_diff"] = r.rel_diff;
    return j;
}

std::string gn_report_to_csv(const GnReport& r, bool header) {
    std::ostringstream os;
    if (header) os << "n,h,Q,case,hardy_proxy,left_exponent,left_norm,right_total,ratio\n";
    os << r.n << "," << r.h << "," << r.q << "," << r.case_id << "," << (r.hardy_proxy ? 1 : 0) << ",";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g,", r.left_exponent);
    os << buf;
    std::snprintf(buf, sizeof buf, "%.17g,", r.left_norm);
    os << buf;
    std::snprintf(buf, sizeof buf, "%.17g,", r.right_total);
    os << buf;
    std::snprintf(buf, sizeof buf, "%.17g", r.ratio);
    os << buf << "\n";
    return os.str();
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("formfield: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void write_formfield(std::ostream& os, const FormField& f) {
    Json header;
    header["schema_version"] = kSchemaVersion;
    header["n"] = f.grid.n;
    header["degree"] = f.h;
    header["basis"] = "e0_basis(" + std::to_string(f.grid.n) + "," + std::to_string(f.h) + ")";
    header["r_xy"] = f.grid.r_xy;
    header["r_t"] = f.grid.r_t;
    header["nodes_xy"] = f.grid.nodes_xy;
    header["nodes_t"] = f.grid.nodes_t;
    header["components"] = static_cast<int>(f.comps.size());
    header["float_format"] = "little-endian float64";
    std::string hs = header.dump();
    os.write("RFF1", 4);
    put_u32(os, static_cast<std::uint32_t>(hs.size()));
    os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    // assumes a little-endian host, as the header advertises
    for (const auto& c : f.comps)
        os.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
}

FormField read_formfield(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "RFF1", 4) != 0) throw std::runtime_error("formfield: bad magic");
    std::uint32_t hlen = get_u32(is);
    std::string hs(hlen, '\0');
    is.read(hs.data(), hlen);
    if (!is) throw std::runtime_error("formfield: truncated header");
    Json header = Json::parse(hs);
    FormField f;
    f.grid.n = header.at("n").get<int>();
    f.h = header.at("degree").get<int>();
    f.grid.r_xy = header.at("r_xy").get<double>();
    f.grid.r_t = header.at("r_t").get<double>();
    f.grid.nodes_xy = header.at("nodes_xy").get<int>();
    f.grid.nodes_t = header.at("nodes_t").get<int>();
    int comps = header.at("components").get<int>();
    std::size_t total = f.grid.total_nodes();
    f.comps.assign(comps, ScalarArray(total, 0.0));
    for (auto& c : f.comps) {
        is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(total * sizeof(double)));
        if (!is) throw std::runtime_error("formfield: truncated data");
    }
    return f;
}

void write_formfield_file(const std::string& path, const FormField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_formfield(os, f);
}

FormField read_formfield_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_formfield(is);
}

} // namespace rumin
