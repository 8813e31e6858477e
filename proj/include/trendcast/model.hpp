#pragma once

#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trendcast/features.hpp"
#include "trendcast/gbdt.hpp"
#include "trendcast/ridge.hpp"

namespace trendcast::models {

enum class ModelKind { kBaseline, kRidge, kGbdt };
enum class TargetKind { kPop, kPct };

std::string to_string(ModelKind kind);
std::string to_string(TargetKind kind);
ModelKind parse_model_kind(const std::string& text);
TargetKind parse_target_kind(const std::string& text);

/// The single lag feature the baseline regresses on for a target.
std::string baseline_feature(TargetKind target);

/// Ridge fit on exactly one lag column; undefined lag values read as zero.
RidgeModel fit_lag_baseline(const features::FeatureTable& table, std::span<const double> targets, TargetKind target,
                            std::span<const double> alpha_grid = default_alpha_grid(), int k_folds = 5);

using Model = std::variant<RidgeModel, GbdtModel>;

ModelKind kind_of(const Model& model);
const features::FeatureSchema& schema_of(const Model& model);

struct FitOptions {
    TrainParams gbdt;
    std::vector<double> alpha_grid = default_alpha_grid();
    int ridge_folds = 5;
};

Model fit_model(ModelKind kind, TargetKind target, const features::FeatureTable& table,
                std::span<const double> targets, const FitOptions& options = {});

/// Throws ValidationError naming the missing or extra feature when the table schema does not match.
std::vector<double> predict(const Model& model, const features::FeatureTable& table);

inline constexpr int kModelSchemaVersion = 1;

/// Self-describing document: schema_version, model_kind, target (optional), schema, parameters, payload.
nlohmann::json to_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);

/// A model plus the target it predicts and the horizon it was trained for.
struct SavedModel {
    Model model;
    TargetKind target = TargetKind::kPop;
    int horizon = features::kDefaultHorizon;
};

void save_model(const SavedModel& saved, const std::string& path);
SavedModel load_model(const std::string& path);

/// Conventional file name for the (horizon, target) model in a model directory.
std::string model_file_name(int horizon, TargetKind target);

}  // namespace trendcast::models
