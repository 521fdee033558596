from app.triangular.basis import TriBasis, TriIndex, build_T, flat_index, tri_basis, unflat_index

__all__ = ["TriBasis", "TriIndex", "build_T", "flat_index", "tri_basis", "unflat_index"]
