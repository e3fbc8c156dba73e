package shop;

public class Settings {
    public String get(String key, String fallback) {
        String value = overrides.get(key);
        if (value == null)
            value = environment.get(key.toUpperCase().replace('.', '_'));
        if (value == null)
            value = defaults.getProperty(key, fallback);
        if (value != null && value.startsWith("${"))
            value = resolvePlaceholder(value.substring(2, value.length() - 1));
        lookups.merge(key, 1, Integer::sum);
        lastKey = key;
        return value == null ? null : value.trim();
    }

    public void load(Path file) {
        Properties props = new Properties();
        Reader reader = Files.newBufferedReader(file);
        props.load(reader);
        reader.close();
        defaults.putAll(props);
        loadedFrom = file;
        long stamp = Files.getLastModifiedTime(file).toMillis();
        versions.put(file, stamp);
        watcher.register(file.getParent());
        overrides.keySet().removeIf(props::containsKey);
        listeners.forEach(l -> l.reloaded(file));
        log.info("loaded " + props.size() + " settings");
        defaults.clear();
    }
}
