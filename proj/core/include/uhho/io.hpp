#pragma once

#include "uhho/errors.hpp"

#include <iosfwd>
#include <string>

namespace uhho {

/// Coordinate-format dump of the assembled symmetric matrix (lower triangle).
void write_matrix_market(std::ostream& os, const SpMat& a);
void write_matrix_market_file(const std::string& path, const SpMat& a);

/// Legacy-VTK unstructured triangles sampling the cellwise polynomials;
/// points are duplicated across the interface so the jump stays visible.
void write_solution_vtk(std::ostream& os, const Workspace& ws, const SolveOutput& out);
void write_solution_vtk_file(const std::string& path, const Workspace& ws, const SolveOutput& out);

/// CSV writers; column schemas in docs/formats.md. Formatting is fixed
/// precision so identical runs produce byte-identical files.
void write_error_csv(std::ostream& os, std::span<const StudyRow> rows);
void write_error_csv_file(const std::string& path, std::span<const StudyRow> rows);

void write_agglomerate_csv(std::ostream& os, const Workspace& ws);

std::string format_sci(double v);

}  // namespace uhho
