from .exceptions import ToolkitError
from .settings import DEFAULT_SETTINGS, Settings, load_settings
from .taylor_series import TaylorSeries
