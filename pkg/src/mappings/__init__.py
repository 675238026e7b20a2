# Mappings package
