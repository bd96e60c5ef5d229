import os
import yaml
import json
import logging
from typing import Dict, Any


class ConfigManager:
    """
    Centralized configuration management for BayesWalk

    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if hasattr(self, 'initialized'):
            return

        # Base directory paths
        self.app_root = os.environ.get('BAYESWALK_ROOT', os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

        # Configuration directories
        self.config_dir = os.path.join(self.app_root, 'src', 'config')
        self.log_dir = os.environ.get('BAYESWALK_LOG_DIR', os.path.join(self.app_root, 'logs'))

        # Default configurations
        self.defaults = {
            'system_settings': {
                'horizon': 500,
                'parallelism': 1,
                'generator': {
                    'max_attempts': 100000,
                    'coord_range': [0.0, 10.0]
                },
                'oracle': {
                    'max_expansions': 100000000,
                    'cyclic_walk_slack': 2,
                    'progress_interval': 1000000
                },
                'enumeration': {
                    'max_horizon': 6,
                    'max_nodes': 12
                }
            },
            'belief_settings': {
                'bandwidth': 1.0,
                'signal_variance': 1.0,
                'kernel_half_factor': True,
                'cost_mean_includes_self_loops': False,
                'observe_start_reward': True,
                'jitter_start': 1.0e-10,
                'jitter_max': 1.0e-6
            },
            'policy_profiles': {
                'baseline': {
                    'M': 'M',
                    'UCB': 'UCB:lambda=1',
                    'HP': 'HP:alpha=1,H=3',
                    'SC': 'SC:beta=1'
                },
                'reference': {
                    'M': 'M',
                    'UCB': 'UCB:lambda=1',
                    'HP': 'HP:alpha=1,H=3,solver=exhaustive',
                    'SC': ['SC:beta=1', 'SC:beta=10', 'SC:beta=100']
                }
            },
            'experiment_design': {
                'sizes': [20, 50, 80],
                'edge_probabilities': [0.2, 0.5, 0.8],
                'lambdas': [0, 1, 10],
                'horizons': [3, 4, 5],
                'alphas': [0, 1, 10],
                'betas': [1, 10, 100],
                'replications': 30,
                'master_seed': 20240101,
                'include_myopic': True
            }
        }

        # Set up basic logging until the logging module is initialized
        self._setup_logging()

        self.logger.info(f"Initializing ConfigManager with app root: {self.app_root}")
        self.logger.info(f"Config directory: {self.config_dir}")

        # Ensure the config directory exists
        os.makedirs(self.config_dir, exist_ok=True)

        # Configuration file paths (support both YAML and JSON)
        self.config_files = {
            name: os.path.join(self.config_dir, f'{name}.yaml')
            for name in self.defaults
        }

        # JSON fallbacks for hand-written overrides
        self.json_fallbacks = {
            name: os.path.join(self.config_dir, f'{name}.json')
            for name in self.defaults
        }

        # Initialize configuration files if they don't exist
        self._init_config_files()

        self.initialized = True

    def _setup_logging(self) -> None:
        """Configure basic logging for the configuration manager"""
        os.makedirs(self.log_dir, exist_ok=True)

        logging.basicConfig(
            level=logging.INFO,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.FileHandler(os.path.join(self.log_dir, 'bayeswalk.log')),
                logging.StreamHandler()
            ]
        )
        self.logger = logging.getLogger("CONFIG")

    def _write_defaults(self, config_name: str, filepath: str) -> None:
        with open(filepath, 'w') as f:
            yaml.dump(self.defaults[config_name], f, default_flow_style=False)

    def _init_config_files(self) -> None:
        """Initialize configuration files with default values if they don't exist"""
        for config_name, filepath in self.config_files.items():
            if not os.path.exists(filepath):
                json_path = self.json_fallbacks[config_name]
                if os.path.exists(json_path):
                    # Convert JSON to YAML
                    try:
                        with open(json_path, 'r') as f:
                            config_data = json.load(f)

                        with open(filepath, 'w') as f:
                            yaml.dump(config_data, f, default_flow_style=False)

                        self.logger.info(f"Converted JSON to YAML: {json_path} -> {filepath}")
                    except Exception as e:
                        self.logger.error(f"Failed to convert JSON to YAML: {e}")
                        self._write_defaults(config_name, filepath)
                else:
                    self.logger.info(f"Creating default configuration file: {filepath}")
                    self._write_defaults(config_name, filepath)
            else:
                # Verify file is valid YAML
                try:
                    with open(filepath, 'r') as f:
                        yaml.safe_load(f)
                except yaml.YAMLError:
                    self.logger.error(f"Invalid YAML in {filepath}, restoring defaults")
                    self._write_defaults(config_name, filepath)

    def get_config(self, config_name: str) -> Dict[str, Any]:
        """
        Read configuration from specified config file

        Keys missing from the file are filled from the defaults, one level deep.

        Args:
            config_name: Name of the configuration to retrieve

        Returns:
            Dict containing the configuration data

        Raises:
            ValueError: If the config_name is unknown
        """
        if config_name not in self.config_files:
            raise ValueError(f"Unknown configuration: {config_name}")

        loaded = None
        try:
            yaml_path = self.config_files[config_name]
            if os.path.exists(yaml_path):
                with open(yaml_path, 'r') as f:
                    loaded = yaml.safe_load(f)
            else:
                json_path = self.json_fallbacks[config_name]
                if os.path.exists(json_path):
                    with open(json_path, 'r') as f:
                        loaded = json.load(f)
        except Exception as e:
            self.logger.error(f"Error reading {config_name} configuration: {e}")

        if not isinstance(loaded, dict):
            self.logger.info(f"Using default configuration for {config_name}")
            return _merge(self.defaults[config_name], {})
        return _merge(self.defaults[config_name], loaded)

    def update_config(self, config_name: str, data: Dict[str, Any]) -> bool:
        """
        Update specified configuration file

        Args:
            config_name: Name of the configuration to update
            data: New configuration data to merge with existing data

        Returns:
            bool: True if update was successful, False otherwise

        Raises:
            ValueError: If the config_name is unknown
        """
        if config_name not in self.config_files:
            raise ValueError(f"Unknown configuration: {config_name}")

        try:
            filepath = self.config_files[config_name]
            current_config = self.get_config(config_name)
            current_config.update(data)

            with open(filepath, 'w') as f:
                yaml.dump(current_config, f, default_flow_style=False)

            self.logger.info(f"Updated {config_name} configuration")
            return True
        except Exception as e:
            self.logger.error(f"Error updating {config_name} configuration: {e}")
            return False

    def get_results_dir(self) -> str:
        """Get the path to the default sweep/report output directory"""
        return os.path.join(self.app_root, 'results')


def _merge(defaults: Dict[str, Any], loaded: Dict[str, Any]) -> Dict[str, Any]:
    merged = {}
    for key, value in defaults.items():
        if isinstance(value, dict):
            merged[key] = dict(value)
        else:
            merged[key] = value
    for key, value in loaded.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    return merged
