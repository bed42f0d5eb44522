from dependency_injector import containers, providers

from ...application.services.bounds_service import BoundsService
from ...application.services.elicitability_service import ElicitabilityService
from ...application.services.estimation_service import EstimationService
from ...application.services.panel_service import PanelService
from ...application.services.parametric_service import ParametricService
from ...application.services.replication_runners import ThreadedReplicationRunner
from ..config.settings import GiniSettings


class Container(containers.DeclarativeContainer):
    # Configuration
    settings = providers.Singleton(GiniSettings.from_env)

    quadrature = providers.Singleton(settings.provided.quadrature.call())
    variance = providers.Singleton(settings.provided.variance.call())
    tolerances = providers.Singleton(settings.provided.tolerances.call())

    # Replications
    replication_runner = providers.Singleton(
        ThreadedReplicationRunner,
        threads=settings.provided.threads,
    )

    # Services
    parametric_service = providers.Factory(
        ParametricService,
        quadrature=quadrature,
        tolerances=tolerances,
    )

    estimation_service = providers.Factory(
        EstimationService,
        runner=replication_runner,
        variance_settings=variance,
        quadrature=quadrature,
    )

    elicitability_service = providers.Factory(
        ElicitabilityService,
        quadrature=quadrature,
    )

    bounds_service = providers.Factory(
        BoundsService,
        quadrature=quadrature,
    )

    panel_service = providers.Factory(PanelService)
