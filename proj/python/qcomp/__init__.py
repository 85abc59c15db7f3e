"""Device selection and device-specific compilation for quantum circuits.

The heavy lifting lives in the C++ extension module ``qcomp._core``; this
package re-exports its public surface.
"""

from qcomp._core import (
    Bundle,
    Circuit,
    BundleError,
    DeviceError,
    QasmError,
    catalog_version,
    compile_baseline,
    critical_depth_score,
    default_fleet,
    features,
    generate_corpus,
    metrics,
    num_qubits,
    parse_qasm,
    pass_catalog,
    serialize_qasm,
    simulate,
    train_bundle,
)

__all__ = [
    "Bundle",
    "Circuit",
    "BundleError",
    "DeviceError",
    "QasmError",
    "catalog_version",
    "compile_baseline",
    "critical_depth_score",
    "default_fleet",
    "features",
    "generate_corpus",
    "metrics",
    "num_qubits",
    "parse_qasm",
    "pass_catalog",
    "serialize_qasm",
    "simulate",
    "train_bundle",
]
