#include "tfcd/spatial.hpp"

namespace tfcd {

void check_field_shape(const Field2D& field, const SpatialMesh& mesh) {
  if (field.rows() != mesh.Mx + 1 || field.cols() != mesh.My + 1) {
    std::ostringstream msg;
    msg << "field is " << field.rows() << "x" << field.cols() << " but the mesh needs "
        << mesh.Mx + 1 << "x" << mesh.My + 1;
    throw std::invalid_argument(msg.str());
  }
}

Field2D apply_hx(const Field2D& v, const SpatialMesh& mesh) {
  check_field_shape(v, mesh);
  return apply_hx(v);
}

Field2D apply_hy(const Field2D& v, const SpatialMesh& mesh) {
  check_field_shape(v, mesh);
  return apply_hy(v);
}

Field2D apply_dxx(const Field2D& v, const SpatialMesh& mesh) {
  check_field_shape(v, mesh);
  return apply_dxx(v, mesh.hx());
}

Field2D apply_dyy(const Field2D& v, const SpatialMesh& mesh) {
  check_field_shape(v, mesh);
  return apply_dyy(v, mesh.hy());
}

}  // namespace tfcd
