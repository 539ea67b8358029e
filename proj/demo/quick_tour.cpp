// Norms and Carleson quantities of a few functions, then one operator scan.
#include "dirimor/operators.hpp"
#include "dirimor/spec.hpp"

#include <cstdio>

using namespace dirimor;

int main() {
    const SpaceParams sp(0.5, 0.4);
    const ScanGrid grid;
    const QuadratureConfig q;

    std::printf("%-26s %12s %12s %12s\n", "function", "D_p norm", "DM norm", "box");
    for (const char* spec : {"taylor:0,1", "taylor:1,2,0,1", "kernel:c=0.9,s=0.15", "fpl:p=0.5,lambda=0.4"}) {
        const AnalyticFunction f = parse_function_spec(spec);
        std::printf("%-26s %12.6f %12.6f %12.6f\n", spec, dirichlet_norm(f, sp.p, q).value,
                    dm_norm_translate(f, sp, grid, q).value, dm_seminorm_box(f, sp, grid, q).value);
    }

    // I_g with a bounded symbol on a small test family
    const TestFamily fam = make_test_family(sp, CGrid{6, 2}, grid, q);
    const RatioScanReport r = ratio_scan(OperatorKind::Ig, make_taylor({0.5, 0.5}), fam, grid, q);
    std::printf("\nI_g, g = (1+z)/2: max ratio %.4f, tail slope %.4f, %s\n", r.max_ratio, r.slope,
                r.classification().c_str());
    return 0;
}
