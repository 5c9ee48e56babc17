#include "supcast_tools/csv.hpp"

#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>
#include <stdexcept>

namespace supcast::tools {

void write_csv(std::ostream& out, std::span<const RunResult> rows) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << kCsvHeader << '\n';
  buf << std::setprecision(10);
  for (const auto& r : rows) {
    buf << to_string(r.scheme) << ',' << r.seed << ',' << r.snr_db << ',' << r.beta << ','
        << r.user_id << ',' << to_string(r.zone) << ',' << r.distance_m << ',' << r.psnr_db << ','
        << r.mse_total << ',' << r.mse_llse << ',' << r.mse_discarded << ','
        << r.mse_undecodable_el << '\n';
  }
  out << buf.str();
}

void write_csv(const std::filesystem::path& path, std::span<const RunResult> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open CSV output: " + path.string());
  write_csv(out, rows);
  if (!out) throw std::runtime_error("failed writing CSV output: " + path.string());
}

}  // namespace supcast::tools
