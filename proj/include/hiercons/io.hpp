#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hiercons/consensus.hpp"
#include "hiercons/dense_matrix.hpp"
#include "hiercons/ensemble.hpp"
#include "hiercons/partition.hpp"
#include "hiercons/resolution.hpp"

namespace hiercons::io {

/// Partition CSV: header `cluster`, then one label per line in node order.
void write_partition_csv(std::ostream& out, const Partition& p);
Partition read_partition_csv(std::istream& in);

/// Ensemble CSV: one row per node, one column per partition. The header holds
/// the gamma of each column, or `t0,t1,...` when there are none.
void write_ensemble_csv(std::ostream& out, const PartitionEnsemble& e);
PartitionEnsemble read_ensemble_csv(std::istream& in);

void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
/// Little-endian: uint64 n, then n*n float64 values row-major.
void write_matrix_binary(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix_binary(std::istream& in);

inline constexpr int kTreeFormatVersion = 1;
nlohmann::json tree_to_json(const ConsensusTree& t);
ConsensusTree tree_from_json(const nlohmann::json& j);
/// Rows `node_id,leaf_cluster,coarse_cluster`.
void write_tree_csv(std::ostream& out, const ConsensusTree& t);

/// Rows `original_id,internal_id`.
void write_node_map_csv(std::ostream& out, const std::vector<std::string>& ids);

/// (gamma, beta) pairs at every event, preceded by (0, 0).
void write_event_table_csv(std::ostream& out, const EventProfile& profile);

std::string read_file(const std::filesystem::path& path);
/// Writes `content` to `path`, throwing Error on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hiercons::io
