#pragma once

#include <cstdint>
#include <string>

namespace bmhd {

// Calibrated constants for one spatial dimension.  Every value is a corpus
// maximum of the matching ratio times the safety margin; the raw maxima are
// kept alongside so stricter margins can be applied offline.
struct DimConstants {
    double c1 = 0.0;           // B-field growth rate constant
    double c2 = 0.0;           // velocity estimate constant
    double c3 = 0.0;           // quartic forcing constant (3D splitting)
    double c4 = 0.0;           // cubic absorption constant (3D splitting)
    double algebra = 0.0;      // ||uv|| <= c ||u|| ||v|| in B-dot^{n/2}_{2,1}
    double embedding_linf = 0.0;   // B-dot^{n/2}_{2,1} -> L^inf
    double embedding_b0 = 0.0;     // B-dot^{n/2}_{2,1} -> B-dot^0_{inf,inf}
    double para_t = 0.0;       // low-high paraproduct constant
    double para_r = 0.0;       // remainder constant
    double commutator = 0.0;   // [(v.grad), block] constant at sigma = n/2
    double chemin = 0.0;       // trilinear transport pairing constant
    double adv_pairing = 0.0;  // |<(g.grad)g, Lambda w>| / (||g||_{H1}^2 ||w||_{H3/2})
    double gronwall = 0.0;     // difference/Gronwall constant (3D)
    double deriv_bound = 0.0;  // nonlinear part of the time-derivative bounds
};

struct CorpusDescriptor {
    int n2d = 32;
    int n3d = 16;
    double box_length = 0.0;  // 2*pi by default (set at calibration)
    int fields = 50;
    int snapshots = 10;
    double alpha_lo = 1.5;
    double alpha_hi = 3.5;
    std::uint64_t seed = 2024;
};

struct ConstantsTable {
    double margin = 1.1;
    CorpusDescriptor corpus;
    DimConstants dim2, dim3;
    DimConstants raw2, raw3;  // corpus maxima before the margin

    const DimConstants& for_dim(int dim) const;

    static ConstantsTable load(const std::string& path);
    void save(const std::string& path) const;  // write-temp-then-rename
};

}  // namespace bmhd
