"""Python interface to the wide-stencil Monge-Ampere solver."""

try:
    # Wheel layout: the extension lives inside the package.
    from ._masl import (
        TriMesh,
        domain_families,
        domain_polygon,
        experiment_names,
        generate_mesh,
        hamiltonian,
        hamiltonian_grid,
        run_study,
        set_thread_count,
        solve_experiment,
        split_max,
        study_csv,
    )
except ImportError:
    # Build-tree layout: the extension is on sys.path next to the package.
    from _masl import (
        TriMesh,
        domain_families,
        domain_polygon,
        experiment_names,
        generate_mesh,
        hamiltonian,
        hamiltonian_grid,
        run_study,
        set_thread_count,
        solve_experiment,
        split_max,
        study_csv,
    )

__all__ = [
    "TriMesh",
    "domain_families",
    "domain_polygon",
    "experiment_names",
    "generate_mesh",
    "hamiltonian",
    "hamiltonian_grid",
    "run_study",
    "set_thread_count",
    "solve_experiment",
    "split_max",
    "study_csv",
]
