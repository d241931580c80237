#include "polystab/io.hpp"

#include "polystab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace polystab::io {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

std::string jnum(double v) { return std::isfinite(v) ? fmt(v) : "null"; }
const char* jbool(bool b) { return b ? "true" : "false"; }

// Rows of equal-length named columns as a JSON array of objects.
class JsonRows {
public:
    void begin_row() {
        out_ << (rows_++ ? ",\n  {" : "[\n  {");
        fields_ = 0;
    }
    void field(const char* name, const std::string& literal) {
        out_ << (fields_++ ? ", " : "") << '"' << name << "\": " << literal;
    }
    void end_row() { out_ << '}'; }
    std::string str() const { return rows_ ? out_.str() + "\n]\n" : "[]\n"; }

private:
    std::ostringstream out_;
    int rows_ = 0;
    int fields_ = 0;
};

}  // namespace

void write_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string base_state_csv(const base::BaseState& s) {
    std::ostringstream o;
    o << "y,u,a11,a12,a22,Z,L,P\n";
    for (int j = 0; j < s.size(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        o << fmt(s.grid.node(j)) << ',' << fmt(s.u[k]) << ',' << fmt(s.a11[k]) << ',' << fmt(s.a12[k]) << ','
          << fmt(s.a22[k]) << ',' << fmt(s.Z[k]) << ',' << fmt(s.L[k]) << ',' << fmt(s.P[k]) << '\n';
    }
    return o.str();
}

std::string base_state_json(const base::BaseState& s) {
    JsonRows j;
    for (int i = 0; i < s.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        j.begin_row();
        j.field("y", jnum(s.grid.node(i)));
        j.field("u", jnum(s.u[k]));
        j.field("a11", jnum(s.a11[k]));
        j.field("a12", jnum(s.a12[k]));
        j.field("a22", jnum(s.a22[k]));
        j.field("Z", jnum(s.Z[k]));
        j.field("L", jnum(s.L[k]));
        j.field("P", jnum(s.P[k]));
        j.end_row();
    }
    return j.str();
}

std::string spectrum_csv(const spec::SpectrumResult& r) {
    std::ostringstream o;
    o << "re_lambda,im_lambda,residual,newton_iters,certified,seed_re,seed_im\n";
    for (const auto& e : r.eigenvalues) {
        o << fmt(e.lambda.real()) << ',' << fmt(e.lambda.imag()) << ',' << fmt(e.residual) << ',' << e.newton_iters
          << ',' << (e.certified ? 1 : 0) << ',' << fmt(e.seed.real()) << ',' << fmt(e.seed.imag()) << '\n';
    }
    return o.str();
}

std::string spectrum_json(const spec::SpectrumResult& r) {
    JsonRows j;
    for (const auto& e : r.eigenvalues) {
        j.begin_row();
        j.field("re_lambda", jnum(e.lambda.real()));
        j.field("im_lambda", jnum(e.lambda.imag()));
        j.field("residual", jnum(e.residual));
        j.field("newton_iters", std::to_string(e.newton_iters));
        j.field("certified", jbool(e.certified));
        j.field("seed_re", jnum(e.seed.real()));
        j.field("seed_im", jnum(e.seed.imag()));
        j.end_row();
    }
    return j.str();
}

std::string asymptotics_json(const asym::AsymptoticReport& r) {
    std::ostringstream o;
    o << "{\n"
      << "  \"mu\": " << jnum(r.mu) << ",\n"
      << "  \"drift_re\": " << jnum(r.drift.real()) << ",\n"
      << "  \"drift_im\": " << jnum(r.drift.imag()) << ",\n"
      << "  \"re_lambda_inf\": " << jnum(r.re_lambda_inf) << ",\n"
      << "  \"im_spacing\": " << jnum(r.im_spacing) << ",\n"
      << "  \"criterion_S\": " << jnum(r.criterion_S) << ",\n"
      << "  \"necessary_condition_met\": " << jbool(r.necessary_condition_met) << "\n"
      << "}\n";
    return o.str();
}

std::string verify_csv(const asym::VerificationTable& t) {
    std::ostringstream o;
    o << "k,re_num,im_num,re_asym,im_asym,err,err_times_k\n";
    for (const auto& r : t.rows) {
        o << r.k << ',' << fmt(r.lambda_num.real()) << ',' << fmt(r.lambda_num.imag()) << ','
          << fmt(r.lambda_asym.real()) << ',' << fmt(r.lambda_asym.imag()) << ',' << fmt(r.err) << ','
          << fmt(r.err_times_k) << '\n';
    }
    return o.str();
}

std::string verify_json(const asym::VerificationTable& t) {
    JsonRows j;
    for (const auto& r : t.rows) {
        j.begin_row();
        j.field("k", std::to_string(r.k));
        j.field("re_num", jnum(r.lambda_num.real()));
        j.field("im_num", jnum(r.lambda_num.imag()));
        j.field("re_asym", jnum(r.lambda_asym.real()));
        j.field("im_asym", jnum(r.lambda_asym.imag()));
        j.field("err", jnum(r.err));
        j.field("err_times_k", jnum(r.err_times_k));
        j.end_row();
    }
    return j.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream o;
    o << "value,criterion_S,re_lambda_inf,max_abs_u,bottom_ratio,residual,ok\n";
    for (const auto& r : rows) {
        o << fmt(r.value) << ',' << fmt(r.criterion_S) << ',' << fmt(r.re_lambda_inf) << ',' << fmt(r.max_abs_u)
          << ',' << fmt(r.bottom_ratio) << ',' << fmt(r.residual) << ',' << (r.ok ? 1 : 0) << '\n';
    }
    return o.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
    JsonRows j;
    for (const auto& r : rows) {
        j.begin_row();
        j.field("value", jnum(r.value));
        j.field("criterion_S", jnum(r.criterion_S));
        j.field("re_lambda_inf", jnum(r.re_lambda_inf));
        j.field("max_abs_u", jnum(r.max_abs_u));
        j.field("bottom_ratio", jnum(r.bottom_ratio));
        j.field("residual", jnum(r.residual));
        j.field("ok", jbool(r.ok));
        j.end_row();
    }
    return j.str();
}

std::string base_state_tsv(const base::BaseState& s) {
    std::ostringstream o;
    o << "y\tu\tu_p\ta11\ta12\ta22\tZ\tL\tP\n";
    for (int j = 0; j < s.size(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        o << fmt(s.grid.node(j)) << '\t' << fmt(s.u[k]) << '\t' << fmt(s.u_p[k]) << '\t' << fmt(s.a11[k]) << '\t'
          << fmt(s.a12[k]) << '\t' << fmt(s.a22[k]) << '\t' << fmt(s.Z[k]) << '\t' << fmt(s.L[k]) << '\t'
          << fmt(s.P[k]) << '\n';
    }
    return o.str();
}

std::string spectrum_tsv(const spec::SpectrumResult& r) {
    std::ostringstream o;
    o << "re_lambda\tim_lambda\tcertified\n";
    for (const auto& e : r.eigenvalues) {
        o << fmt(e.lambda.real()) << '\t' << fmt(e.lambda.imag()) << '\t' << (e.certified ? 1 : 0) << '\n';
    }
    return o.str();
}

}  // namespace polystab::io
