#include "qdl/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qdl {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump(const ojson& j, std::ostringstream& os, int indent) {
    std::string pad(indent, ' '), pad2(indent + 2, ' ');
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad2 << ojson(it.key()).dump() << ": ";
                dump(it.value(), os, indent + 2);
            }
            os << "\n" << pad << "}";
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            bool flat = true;
            for (auto& e : j)
                if (e.is_structured()) flat = false;
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    dump(j[i], os, indent);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad2;
                dump(j[i], os, indent + 2);
            }
            os << "\n" << pad << "]";
            return;
        }
        case ojson::value_t::number_float: {
            double v = j.get<double>();
            // JSON has no nan/inf
            if (!std::isfinite(v))
                os << "null";
            else
                os << format_double(v);
            return;
        }
        default:
            os << j.dump();
    }
}

ojson num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

std::string dump_json(const ojson& j) {
    std::ostringstream os;
    dump(j, os, 0);
    os << "\n";
    return os.str();
}

ojson make_report(const std::string& kind) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

std::vector<std::string> sweep_columns() {
    return {"index", "form", "B", "N", "X", "M", "env_thm1", "ratio_thm1", "env_thm2", "ratio_thm2",
            "singular_series", "sigma_inf", "majorant", "majorant_constant", "majorant_ok", "error"};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    auto cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    auto quote = [](const std::string& s) {
        std::string o = "\"";
        for (char ch : s) {
            if (ch == '"') o += '"';
            o += ch;
        }
        return o + "\"";
    };
    for (auto& r : rows) {
        os << r.index << "," << quote(r.form) << "," << r.B << "," << r.N << "," << format_double(r.X) << "," << r.M
           << "," << format_double(r.env_thm1) << "," << format_double(r.ratio_thm1) << ","
           << format_double(r.env_thm2) << "," << format_double(r.ratio_thm2) << "," << format_double(r.singular)
           << "," << format_double(r.sigma_inf) << "," << format_double(r.majorant) << ","
           << format_double(r.majorant_constant) << "," << (r.majorant_ok ? "true" : "false") << "," << quote(r.error)
           << "\n";
    }
    return os.str();
}

ojson sweep_json(const std::vector<SweepRow>& rows) {
    ojson j = make_report("sweep");
    ojson arr = ojson::array();
    for (auto& r : rows) {
        ojson o;
        o["index"] = r.index;
        o["form"] = r.form;
        o["B"] = r.B;
        o["N"] = r.N;
        o["X"] = num(r.X);
        o["M"] = r.M;
        o["env_thm1"] = num(r.env_thm1);
        o["ratio_thm1"] = num(r.ratio_thm1);
        o["env_thm2"] = num(r.env_thm2);
        o["ratio_thm2"] = num(r.ratio_thm2);
        o["singular_series"] = num(r.singular);
        o["sigma_inf"] = num(r.sigma_inf);
        o["majorant"] = num(r.majorant);
        o["majorant_constant"] = num(r.majorant_constant);
        o["majorant_ok"] = r.majorant_ok;
        o["error"] = r.error;
        arr.push_back(o);
    }
    j["rows"] = arr;
    return j;
}

ojson reconstruction_json(const ReconstructionReport& r, bool with_ledger) {
    ojson j = make_report("reconstruct");
    j["form"] = r.form.str();
    j["B"] = r.B;
    j["X"] = num(r.X);
    j["q_max"] = r.q_max;
    j["c_max"] = r.c_max;
    j["reconstructed"] = num(r.reconstructed);
    j["exact_weighted"] = num(r.exact_weighted);
    j["main_term"] = num(r.main_term);
    j["rel_err_vs_exact"] = num(r.rel_err_vs_exact);
    ojson shells = ojson::array();
    for (int s = 0; s <= r.c_max; ++s) shells.push_back(num(r.shell_total(s)));
    j["shell_totals"] = shells;
    if (with_ledger) {
        ojson led = ojson::array();
        for (auto& e : r.ledger) {
            if (e.contribution == 0) continue;
            led.push_back(ojson::array({e.q, e.shell, num(e.contribution)}));
        }
        j["ledger"] = led;
    }
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    f.close();
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace qdl
