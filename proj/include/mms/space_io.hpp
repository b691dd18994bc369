#pragma once

#include "mms/space.hpp"

#include <iosfwd>
#include <string>

namespace mms {

/// Text serialisation with sections [space], [points], [weights], [dist],
/// [edges], [boundary]. Decimal values carry 17 significant digits so a
/// write/read round trip reproduces every double bit for bit. The grammar
/// is described in docs/space_format.md.
void write_space(std::ostream& out, const FiniteMMS& space, bool include_dist = true);
FiniteMMS read_space(std::istream& in);

void save_space(const std::string& path, const FiniteMMS& space, bool include_dist = true);
FiniteMMS load_space(const std::string& path);

/// Newline-delimited decimal values, one per point.
void write_field(std::ostream& out, const Eigen::VectorXd& values);
Eigen::VectorXd read_field(std::istream& in);

/// Sparse operator as "row col value" lines.
void write_coo(std::ostream& out, const SparseMatrix& op);

std::string format_double(double x);

}  // namespace mms
