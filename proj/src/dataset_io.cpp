#include "qsysid/dataset_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qsysid/errors.hpp"

namespace qsysid {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_dataset_csv(std::ostream& out, const Dataset& data, bool with_latent) {
    const bool latent = with_latent && data.z_true.has_value();
    out << (latent ? "t,u,y,z\n" : "t,u,y\n");
    for (Eigen::Index t = 0; t < data.y.size(); ++t) {
        out << t + 1 << ',' << format_double(data.u[t]) << ',' << format_double(data.y[t]);
        if (latent) out << ',' << format_double((*data.z_true)[t]);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw FormatError("dataset line " + std::to_string(line_no) + ": malformed number '" + s + "'");
    }
    return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("dataset: empty file");
    const auto header = split(line);
    int col_t = -1, col_u = -1, col_y = -1, col_z = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const int idx = static_cast<int>(i);
        if (header[i] == "t") col_t = idx;
        else if (header[i] == "u") col_u = idx;
        else if (header[i] == "y") col_y = idx;
        else if (header[i] == "z") col_z = idx;
    }
    if (col_t < 0 || col_u < 0 || col_y < 0) throw FormatError("dataset: header must contain t, u and y");

    std::vector<double> u, y, z;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            throw FormatError("dataset line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields");
        }
        const double t = to_double(fields[static_cast<std::size_t>(col_t)], line_no);
        if (t != static_cast<double>(u.size() + 1)) {
            throw FormatError("dataset line " + std::to_string(line_no) + ": t must count 1, 2, ...");
        }
        u.push_back(to_double(fields[static_cast<std::size_t>(col_u)], line_no));
        y.push_back(to_double(fields[static_cast<std::size_t>(col_y)], line_no));
        if (col_z >= 0) z.push_back(to_double(fields[static_cast<std::size_t>(col_z)], line_no));
    }
    if (y.empty()) throw FormatError("dataset: no samples");

    Dataset d;
    d.u = Eigen::Map<const Vector>(u.data(), static_cast<Eigen::Index>(u.size()));
    d.y = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
    if (col_z >= 0) d.z_true = Eigen::Map<const Vector>(z.data(), static_cast<Eigen::Index>(z.size()));
    if (!d.u.allFinite() || !d.y.allFinite()) throw FormatError("dataset: non-finite entries");
    return d;
}

void write_impulse_response_csv(std::ostream& out, const ImpulseResponse& g, const std::string& column) {
    out << "k," << column << '\n';
    for (Eigen::Index k = 0; k < g.size(); ++k) out << k + 1 << ',' << format_double(g[k]) << '\n';
}

}  // namespace qsysid
