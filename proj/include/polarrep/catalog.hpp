#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "polarrep/sympair.hpp"

namespace polarrep {

using CatalogParams = std::map<std::string, int>;

/// Splits "name:key=value,key=value".
std::pair<std::string, CatalogParams> parse_builtin(const std::string& spec);

/// Builtin symmetric pairs, generated from matrix realizations:
///   sl2-adjoint            sl(2,R)+sl(2,R) with the swap
///   sln-son:n              sl(n,R)/so(n)
///   sln-sopq:n,p           sl(n,R)/so(p,n-p)
///   supq:p,q[,r,s]         su(r+s, n-r-s)/s(u(r,p-r)+u(s,q-s)), defaults r=p, s=0;
///                          r=p, s=q is the compact case
SymmetricPairModel catalog_pair(const std::string& name, const CatalogParams& params = {});

/// Any builtin as a representation. Besides the pairs above:
///   torus-c3               T^2 on R^{4,2} with weights (1,0), (0,1), (1,1); not polar
///   so3-r3                 so(3) on R^3
RepresentationModel catalog_representation(const std::string& spec, std::uint64_t seed = 0);

std::vector<std::string> catalog_names();

/// True for the builtins that are isotropy representations of symmetric pairs.
bool catalog_is_pair(const std::string& name);

}  // namespace polarrep
