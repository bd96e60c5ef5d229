from .config_manager import ConfigManager

# Singleton instance
config = ConfigManager()
