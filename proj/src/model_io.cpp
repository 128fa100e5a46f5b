#include "chronotopics/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chronotopics/corpus.hpp"

namespace chronotopics {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::noc: return "noc";
        case ModelKind::lda: return "lda";
        case ModelKind::tot: return "tot";
    }
    return "noc";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "noc") return ModelKind::noc;
    if (name == "lda") return ModelKind::lda;
    if (name == "tot") return ModelKind::tot;
    throw std::invalid_argument("unknown model '" + name + "' (expected noc, lda or tot)");
}

std::string to_string(PsiInit init) { return init == PsiInit::activity ? "activity" : "random"; }
std::string to_string(Estimate estimate) { return estimate == Estimate::average ? "average" : "final"; }

std::string format_probability(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string format_exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
    auto out = open_out(path);
    std::string line;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) line += ',';
            line += format_probability(m(r, c));
        }
        line += '\n';
        out << line;
    }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            const auto comma = line.find(',', start);
            const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError("malformed number in " + path.string());
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) throw DataError("ragged rows in " + path.string());
        rows.push_back(std::move(row));
    }
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

void write_assignments(const std::vector<std::vector<std::uint32_t>>& z, const std::filesystem::path& path) {
    auto out = open_out(path);
    for (std::size_t d = 0; d < z.size(); ++d)
        for (std::size_t i = 0; i < z[d].size(); ++i) out << d << ' ' << i << ' ' << z[d][i] << '\n';
}

void write_model(const ModelOutput& model, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    // Stale files from an earlier run with another model would mislead eval.
    for (const char* name : {"psi.csv", "beta_params.csv"}) std::filesystem::remove(dir / name);

    write_matrix_csv(model.posterior.phi, dir / "phi.csv");
    write_matrix_csv(model.posterior.theta, dir / "theta.csv");
    if (model.posterior.psi) write_matrix_csv(*model.posterior.psi, dir / "psi.csv");
    if (model.kind == ModelKind::tot) {
        auto out = open_out(dir / "beta_params.csv");
        for (const auto& p : model.beta) out << format_probability(p.a) << ',' << format_probability(p.b) << '\n';
    }
    if (model.assignments) write_assignments(*model.assignments, dir / "assignments.txt");

    const NocConfig& c = model.config;
    auto out = open_out(dir / "fit.meta");
    out << "model=" << to_string(model.kind) << '\n'
        << "topics=" << c.topics << '\n'
        << "alpha=" << format_exact(c.alpha) << '\n'
        << "beta=" << format_exact(c.beta) << '\n'
        << "sweeps=" << c.sweeps << '\n'
        << "burn_in=" << c.burn_in << '\n'
        << "seed=" << c.seed << '\n';
    if (model.kind == ModelKind::noc) {
        out << "psi_init=" << to_string(c.psi_init) << '\n'
            << "psi_smoothing=" << format_exact(c.smoothing(model.posterior.psi ? model.posterior.psi->cols() : 1))
            << '\n';
    }
    out << "estimate=" << to_string(c.estimate) << '\n'
        << "docs=" << model.posterior.theta.rows() << '\n'
        << "vocab=" << model.posterior.phi.cols() << '\n';
    if (model.posterior.psi) out << "slices=" << model.posterior.psi->cols() << '\n';
    out << "phi_layout=rows:topic,cols:word_id\n"
        << "theta_layout=rows:doc_id,cols:topic\n";
    if (model.posterior.psi) out << "psi_layout=rows:topic,cols:time_category\n";
    if (model.kind == ModelKind::tot) out << "beta_params_layout=rows:topic,cols:a,b\n";
    if (model.diagnostics) {
        out << "log_joint=";
        for (std::size_t i = 0; i < model.diagnostics->log_joint.size(); ++i)
            out << (i ? "," : "") << format_exact(model.diagnostics->log_joint[i]);
        out << '\n';
    }
}

LoadedModel read_model(const std::filesystem::path& dir) {
    LoadedModel model;
    std::ifstream in(dir / "fit.meta");
    if (!in) throw DataError("cannot read " + (dir / "fit.meta").string());
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) model.meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
    const auto kind = model.meta.find("model");
    if (kind == model.meta.end()) throw DataError("fit.meta lacks a model entry");
    try {
        model.kind = parse_model_kind(kind->second);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    model.posterior.phi = read_matrix_csv(dir / "phi.csv");
    model.posterior.theta = read_matrix_csv(dir / "theta.csv");
    if (std::filesystem::exists(dir / "psi.csv")) model.posterior.psi = read_matrix_csv(dir / "psi.csv");
    if (model.posterior.theta.cols() != model.posterior.phi.rows() ||
        (model.posterior.psi && model.posterior.psi->rows() != model.posterior.phi.rows()))
        throw DataError("model matrices disagree on the number of topics");
    return model;
}

}  // namespace chronotopics
