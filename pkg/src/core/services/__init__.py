# Core services package
