package lab;

public class Pipeline {
    public void stage1() {
        result = process(input, input);
        total = combine(value, value);
        status = check(entry, entry);
        output = format(record, record);
        count = measure(sample, sample);
    }

    public void stage2() {
        total = combine(value, value);
        status = check(entry, entry);
        output = format(record, record);
        count = measure(sample, sample);
        result = process(input, input);
    }

    public void stage3() {
        status = check(entry, entry);
        output = format(record, record);
        count = measure(sample, sample);
        result = process(input, input);
        total = combine(value, value);
    }

    public void stage4() {
        output = format(record, record);
        count = measure(sample, sample);
        result = process(input, input);
        total = combine(value, value);
        status = check(entry, entry);
    }
}
