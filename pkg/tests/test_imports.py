"""
Test that all modules and components can be imported successfully.
This is crucial for a numeric library to ensure no circular dependencies or import errors.
"""


def test_main_package_import():
    """Test that the main package can be imported."""
    import cliffpoint
    assert cliffpoint.__version__ == "0.1.0"


def test_constants_import():
    """Test that constants module imports successfully."""
    from cliffpoint import constants
    from cliffpoint.constants import (
        TABLE1_M,
        TABLE1_PARAMS,
        PUBLISHED_MQA,
        OutputFormat,
        Ordering,
        ExitCode
    )

    assert constants.DEFAULT_DIGITS >= constants.MIN_DIGITS
    assert set(TABLE1_PARAMS) == set(TABLE1_M)
    assert (100, 1) in PUBLISHED_MQA
    assert OutputFormat.JSON.value == "json"
    assert Ordering.GREATER.value == "greater"
    assert ExitCode.CACHE_IO == 4


def test_utils_import():
    """Test that utils module imports successfully."""
    from cliffpoint import utils
    from cliffpoint.utils import (
        parse_m_range,
        parse_limit,
        to_json_safe
    )

    assert callable(parse_m_range)
    assert callable(parse_limit)
    assert callable(to_json_safe)


def test_schema_package_exports():
    """Test that the schemas package re-exports every model."""
    from cliffpoint.schemas import (
        PrecisionContext,
        SeriesSpec,
        EMParams,
        CrossingResult,
        SincSequence,
        PiecewisePoly,
        IdentityReport,
        APClass,
        CutoffEstimate,
        TowerReal,
        RunConfig,
        CommandReport
    )

    assert PrecisionContext().digits == 50
    assert SeriesSpec(m=3).c == 1
    assert APClass(q=10, a=3).label() == "(10,3)"


def test_services_import():
    """Test that services module imports successfully."""
    from cliffpoint.services import (
        NumericsError,
        CrossingError,
        SincIdentityError,
        PrimeAPError,
        TowerError,
        solve_crossing,
        identity_check,
        cutoff_from_mertens,
        compare
    )

    assert issubclass(CrossingError, NumericsError)
    assert issubclass(SincIdentityError, NumericsError)
    assert issubclass(TowerError, NumericsError)
    assert not issubclass(PrimeAPError, NumericsError)
    assert callable(solve_crossing)
    assert callable(identity_check)


def test_cli_import():
    """Test that the command line group is importable."""
    from cliffpoint.cli import cli

    assert set(cli.commands) >= {"table1", "sinc-check", "mertens", "cutoff", "towers"}


def test_no_circular_imports():
    """Test that there are no circular import issues."""
    import cliffpoint.constants
    import cliffpoint.utils
    import cliffpoint.schemas.numerics
    import cliffpoint.schemas.series
    import cliffpoint.schemas.sinc
    import cliffpoint.schemas.primes
    import cliffpoint.schemas.towers
    import cliffpoint.schemas.config
    import cliffpoint.services.numerics
    import cliffpoint.services.euler_maclaurin
    import cliffpoint.services.piecewise
    import cliffpoint.services.sinc_identity
    import cliffpoint.services.sieve
    import cliffpoint.services.prime_ap
    import cliffpoint.services.towers
    import cliffpoint.cli

    assert True
