#pragma once

#include <string_view>
#include <vector>

#include "pairedk/laurent.hpp"

namespace pairedk {

enum class Location { Inside, On, Outside };

std::string_view to_string(Location loc);
Location location_from_string(std::string_view s);
Location reflect(Location loc);  // effect of z -> 1/conj(z)

/// Location of a point relative to the unit circle with the eps_circle band.
Location classify(cplx v);

struct Root {
    cplx value;
    int multiplicity = 1;
    Location loc = Location::Inside;
};

struct RootSet {
    std::vector<Root> roots;
    double max_residual = 0.0;  // max |p(root)| / ||p||_1 over simple roots

    int degree() const;
    int count(Location loc) const;
};

/// Roots of the polynomial part z^-lo * p (the monomial factor is dropped),
/// from companion-matrix eigenvalues, Newton-polished and clustered.
RootSet poly_roots(const LaurentPoly& p);

/// Merges roots closer than eps_cluster, summing multiplicities at the centroid.
std::vector<Root> cluster_roots(std::vector<Root> roots);

}  // namespace pairedk
