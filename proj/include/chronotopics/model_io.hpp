#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronotopics/baselines.hpp"
#include "chronotopics/matrix.hpp"
#include "chronotopics/sampler.hpp"

namespace chronotopics {

enum class ModelKind { noc, lda, tot };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);  // throws std::invalid_argument
std::string to_string(PsiInit init);
std::string to_string(Estimate estimate);

/// `%.9g`, the precision used for every matrix file.
std::string format_probability(double x);
/// `%.17g`, round-trippable.
std::string format_exact(double x);

/// One row per line, comma separated, 9 significant digits.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// "doc_id position topic" per token.
void write_assignments(const std::vector<std::vector<std::uint32_t>>& z, const std::filesystem::path& path);

struct ModelOutput {
    ModelKind kind = ModelKind::noc;
    NocConfig config;
    Posterior posterior;
    const std::vector<std::vector<std::uint32_t>>* assignments = nullptr;
    const FitDiagnostics* diagnostics = nullptr;
    std::vector<BetaParams> beta;  // tot only
};

/// phi.csv, theta.csv, psi.csv (noc, tot), beta_params.csv (tot),
/// assignments.txt and fit.meta. Wall times are kept out of the directory so
/// reruns are byte-identical.
void write_model(const ModelOutput& model, const std::filesystem::path& dir);

struct LoadedModel {
    ModelKind kind = ModelKind::noc;
    Posterior posterior;
    std::map<std::string, std::string> meta;
};

LoadedModel read_model(const std::filesystem::path& dir);

}  // namespace chronotopics
