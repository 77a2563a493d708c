"""singbol: desk-scale verification of weighted isoperimetric deficits,
two-measure rearrangements, and mean field uniqueness thresholds for
singular Liouville-type radial problems."""

from .bubble import (
    BubbleParams,
    boundary_root_integral,
    bubble_mass,
    bubble_mass_inverse,
    bubble_residual,
    critical_lambda,
    eval_bubble,
    exterior_bubble_mass,
    lambdas_from_boundary,
    pair_lambda,
    total_mass,
)
from .bol import (
    AdmissibleProfile,
    bol_deficit_exterior,
    bol_deficit_interior,
    boundary_comparison,
    check_differential_inequality,
    check_exterior_inequality,
    covering_deficit,
    exterior_between_profile,
    exterior_sandwich,
    exterior_shift_profile,
    generate_test_profile,
    mass_alternative,
    same_mass_bound,
    shift_to_mass,
)
from .errors import SingbolError
from .meanfield import (
    RegionDescriptor,
    ScanResult,
    ShootResult,
    SingularData,
    alpha_region,
    fill_holes,
    reduce_sphere_to_plane,
    shoot_disk,
    shoot_sphere,
    sphere_area_fraction,
    stereographic,
    stereographic_inverse,
    thresholds,
    uniqueness_scan,
)
from .onsager import (
    OnsagerParams,
    contradiction_value,
    deficit_bound,
    gamma_threshold,
    laplacian_H,
    onsager_record,
    onsager_weight,
    positivity_radius,
    remark_check,
)
from .profiles import RadialProfile, radial_grid
from .quadrature import (
    CumulativeMass,
    WeightedRadialDensity,
    annulus_integral,
    circle_root_integral,
    cumulative_mass_table,
    invert_mass,
)
from .rearrange import (
    CellGrid2D,
    MeasurePair,
    bubble_measure,
    distribution_function,
    equimeasurability_report,
    gradient_level_check,
    lebesgue_measure,
    rearrange_two_measures,
)
from .reporting import DeficitReport

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
