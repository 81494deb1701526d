#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "targetsearch/experiment.hpp"

namespace targetsearch {

/// Deterministic shortest-roundtrip text form of a double (CSV cells must be
/// byte-stable across reruns).
std::string format_number(double value);

/// Per-step CSV, one row per executed step and seed. Header:
/// step,seed,qx,qy,qz,n_hat,n_found,n_meas,n_gated,score_expl,score_refine
void write_steps_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// Found-target CSV. Header:
/// seed,found_step,x,y,z,matched_truth_index,match_dist
void write_found_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// Per-seed roll-up (steps to completion, RMSE, timing, obstacle clearance).
void write_summary_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// True target positions per seed, for auditing.
void write_targets_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// Write every run artifact for an experiment into a directory.
void write_run_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                       const std::vector<RunRecord>& records);

/// Aggregate a previously written run directory: emits
/// aggregate_detections.csv, aggregate_summary.csv and detections.svg.
void write_report(const std::filesystem::path& run_dir);

}  // namespace targetsearch
