#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>

#include "supcast/pipeline.hpp"

namespace supcast::tools {

inline constexpr std::string_view kCsvHeader =
    "scheme,seed,snr_db,beta,user_id,zone,distance_m,psnr_db,mse_total,mse_llse,"
    "mse_discarded,mse_undecodable_el";

/// Header plus one LF-terminated line per row; locale-independent formatting.
void write_csv(std::ostream& out, std::span<const RunResult> rows);
void write_csv(const std::filesystem::path& path, std::span<const RunResult> rows);

}  // namespace supcast::tools
